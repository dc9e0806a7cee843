"""
Z/2m-graded acyclic filtered complexes over F_q.

These are the objects of the flag categories attached to graded point
sets: an acyclic complex with one complete filtration per boundary (two
at a crossing), whose graded pieces each carry one-dimensional total
cohomology in the degree prescribed by the boundary point.  The module
provides Hom complexes of flag-preserving maps, Ext profiles, orders of
automorphism groups (units of H^0 of the endomorphism algebra), the
Barannikov normal form and its inverse classification, and the gamma
exponent of the 2-Calabi-Yau weight.

Grading convention: m is the half-period, so degrees live in Z/2m; m = 0
means an honest Z-grading with no wrap-around.  Differentials have degree
+1 and strictly decrease every filtration they preserve.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import fq
from .fq import FqMatrix


class ResourceCapError(RuntimeError):
    """An enumeration would exceed the configured resource cap."""


def deg_reduce(a: int, m: int) -> int:
    return a % (2 * m) if m > 0 else a


def deg_eq(a: int, b: int, m: int) -> bool:
    return (a - b) % (2 * m) == 0 if m > 0 else a == b


@dataclass(frozen=True)
class GradedPointSet:
    """Finite graded set of boundary points, ordered bottom-to-top.

    m is the grading half-period (2m-periodic degrees; m = 0 means Z).
    """

    m: int
    degrees: tuple[int, ...]

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("m must be >= 0")
        object.__setattr__(
            self, "degrees", tuple(deg_reduce(d, self.m) for d in self.degrees)
        )

    def __len__(self):
        return len(self.degrees)

    def deg(self, i: int) -> int:
        """Degree of the i-th point, 1-based from the bottom."""
        return self.degrees[i - 1]


@dataclass(frozen=True)
class Ruling:
    """A graded perfect matching: pairs (s, t) with s < t and deg s = deg t + 1."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = tuple(sorted((min(p), max(p)) for p in self.pairs))
        seen = [i for p in norm for i in p]
        if len(set(seen)) != len(seen):
            raise ValueError("pairs overlap")
        object.__setattr__(self, "pairs", norm)

    def partner(self, i: int) -> int:
        for s, t in self.pairs:
            if s == i:
                return t
            if t == i:
                return s
        raise KeyError(i)

    def contains(self, s: int, t: int) -> bool:
        return (min(s, t), max(s, t)) in self.pairs

    def indices(self):
        return sorted(i for p in self.pairs for i in p)

    def is_valid_for(self, points: GradedPointSet) -> bool:
        if len(self.pairs) * 2 != len(points):
            return False
        if self.indices() != list(range(1, len(points) + 1)):
            return False
        return all(
            deg_eq(points.deg(s), points.deg(t) + 1, points.m) for s, t in self.pairs
        )

    def relabel(self, mapping: dict[int, int]) -> "Ruling":
        return Ruling(tuple((mapping[s], mapping[t]) for s, t in self.pairs))


def sort_rulings(rulings: Iterable[Ruling]) -> list[Ruling]:
    return sorted(rulings, key=lambda r: r.pairs)


class FlaggedComplex:
    """Acyclic Z/2m-graded complex with one or more complete filtrations.

    d[i, j] is the coefficient of e_i in d(e_j).  Each flag is a tuple of
    interior steps, each step an (n x k) column basis of a graded,
    d-invariant subspace; the implicit anchors 0 and the whole space are
    not stored.  boundary[f] records the graded point set the f-th flag
    is attached to (its length is the number of steps plus one).
    """

    __slots__ = ("q", "m", "degs", "d", "flags", "boundaries")

    def __init__(self, q, m, degs, d, flags, boundaries, validate=True):
        fq.check_prime(q)
        self.q = q
        self.m = m
        self.degs = tuple(deg_reduce(x, m) for x in degs)
        self.d = np.asarray(d, dtype=np.int64) % q
        self.flags = tuple(
            tuple(np.asarray(step, dtype=np.int64) % q for step in flag)
            for flag in flags
        )
        self.boundaries = tuple(boundaries)
        if validate:
            self._validate()

    @property
    def dim(self) -> int:
        return len(self.degs)

    def _validate(self):
        n = self.dim
        if self.d.shape != (n, n):
            raise ValueError("differential shape mismatch")
        for i in range(n):
            for j in range(n):
                if self.d[i, j] and not deg_eq(self.degs[i], self.degs[j] + 1, self.m):
                    raise ValueError("differential is not of degree +1")
        if np.any((self.d @ self.d) % self.q):
            raise ValueError("d^2 != 0")
        if 2 * fq.rank(self.d, self.q) != n:
            raise ValueError("complex is not acyclic")
        if len(self.flags) != len(self.boundaries):
            raise ValueError("one boundary per flag required")
        for flag, bdry in zip(self.flags, self.boundaries):
            if len(flag) != max(len(bdry) - 1, 0):
                raise ValueError("flag step count does not match boundary size")
            prev = np.zeros((n, 0), dtype=np.int64)
            prev_rank = 0
            for step in flag:
                r = fq.rank(step, self.q)
                if r != step.shape[1]:
                    raise ValueError("flag step basis is degenerate")
                if fq.rank(np.hstack([prev, step]), self.q) != r:
                    raise ValueError("flag steps are not nested")
                if r <= prev_rank:
                    raise ValueError("flag steps do not strictly increase")
                if not self._is_graded(step):
                    raise ValueError("flag step is not a graded subspace")
                dstep = (self.d @ step) % self.q
                if fq.rank(np.hstack([step, dstep]), self.q) != r:
                    raise ValueError("flag step is not d-invariant")
                prev, prev_rank = step, r

    def _is_graded(self, cols: np.ndarray) -> bool:
        classes = sorted(set(self.degs))
        comps = []
        for cls in classes:
            mask = np.array([deg_eq(x, cls, self.m) for x in self.degs])
            comp = cols * mask[:, None]
            comps.append(comp)
        stacked = np.hstack(comps)
        return fq.rank(stacked, self.q) == fq.rank(cols, self.q)

    # -- flag access -----------------------------------------------------

    def flag_chain(self, f: int) -> list[np.ndarray]:
        """Full chain 0 = F_0, ..., F_n = C as column bases."""
        n = self.dim
        chain = [np.zeros((n, 0), dtype=np.int64)]
        chain.extend(self.flags[f])
        chain.append(np.eye(n, dtype=np.int64))
        return chain

    def is_c1(self) -> bool:
        """Do all graded pieces of all flags have rank-1 cohomology in the
        degree of the matching boundary point?"""
        for f, bdry in enumerate(self.boundaries):
            if self.dim == 0:
                continue
            if len(bdry) == 0:
                return False
            dims = piece_cohomology(self, f)
            for i, (deg, total) in enumerate(dims, start=1):
                if total != 1 or not deg_eq(deg, bdry.deg(i), self.m):
                    return False
        return True

    def __repr__(self):
        return (
            f"FlaggedComplex(q={self.q}, m={self.m}, degs={self.degs}, "
            f"flags={len(self.flags)})"
        )


# ---------------------------------------------------------------------------
# adapted bases and graded pieces
# ---------------------------------------------------------------------------


def adapted_basis(x: FlaggedComplex, f: int) -> tuple[np.ndarray, list[int]]:
    """Homogeneous invertible matrix whose leading column blocks span the
    flag steps.  Returns (A, sizes); in A-coordinates the flag is the
    coordinate flag and every column has a single degree.
    """
    n = x.dim
    classes = sorted(set(x.degs))
    masks = {
        cls: np.array([deg_eq(d, cls, x.m) for d in x.degs], dtype=np.int64)
        for cls in classes
    }
    cols: list[np.ndarray] = []
    sizes = []
    cur = np.zeros((n, 0), dtype=np.int64)
    cur_rank = 0
    for step in x.flag_chain(f)[1:]:
        added = 0
        # graded steps are spanned by the degree components of their basis
        for cls in classes:
            comp = (step * masks[cls][:, None]) % x.q
            for j in range(comp.shape[1]):
                v = comp[:, j : j + 1]
                if not v.any():
                    continue
                test = np.hstack([cur, v])
                r = fq.rank(test, x.q)
                if r > cur_rank:
                    cols.append(v)
                    cur, cur_rank = test, r
                    added += 1
        sizes.append(added)
    A = np.hstack(cols) if cols else np.zeros((n, 0), dtype=np.int64)
    if A.shape[1] != n:
        raise ValueError("flag chain does not exhaust the space")
    return A % x.q, sizes


def piece_cohomology(x: FlaggedComplex, f: int) -> list[tuple[int, int]]:
    """Per graded piece of flag f: (degree carrying the cohomology, total rank).

    Pieces with zero cohomology report (0, 0); for pieces whose cohomology
    spreads over several degrees the reported degree is the smallest one
    (callers only rely on the rank-1 case, where it is unique).
    """
    A, sizes = adapted_basis(x, f)
    Ainv = _inv_mod(A, x.q)
    D = (Ainv @ x.d @ A) % x.q
    degs = [_column_degree(x, A[:, j]) for j in range(A.shape[1])]
    out = []
    pos = 0
    for size in sizes:
        sl = slice(pos, pos + size)
        block = D[sl, sl]
        block_degs = degs[pos : pos + size]
        total = 0
        coh_deg = None
        for cls in sorted(set(block_degs)):
            here = [k for k, dg in enumerate(block_degs) if deg_eq(dg, cls, x.m)]
            out_rk = fq.rank(block[:, here], x.q) if here else 0
            into = [
                k
                for k, dg in enumerate(block_degs)
                if deg_eq(dg + 1, cls, x.m)
            ]
            in_rk = fq.rank(block[np.ix_(here, into)], x.q) if here and into else 0
            h = len(here) - out_rk - in_rk
            if h:
                total += h
                if coh_deg is None:
                    coh_deg = cls
        out.append((coh_deg if coh_deg is not None else 0, total))
        pos += size
    return out


def _column_degree(x: FlaggedComplex, col: np.ndarray) -> int:
    nz = np.nonzero(col)[0]
    cls = {deg_reduce(x.degs[int(i)], x.m) for i in nz}
    if len(cls) != 1:
        raise ValueError("adapted basis vector is not homogeneous")
    return cls.pop()


def _inv_mod(A: np.ndarray, q: int) -> np.ndarray:
    n = A.shape[0]
    return fq.solve(A, np.eye(n, dtype=np.int64), q)


# ---------------------------------------------------------------------------
# Hom complexes of flag-preserving maps
# ---------------------------------------------------------------------------


def hom_basis(x: FlaggedComplex, y: FlaggedComplex, t: int) -> list[np.ndarray]:
    """Basis of degree-t linear maps x -> y preserving all paired flags."""
    if x.m != y.m or x.q != y.q:
        raise ValueError("incompatible grading or base field")
    if len(x.flags) != len(y.flags):
        raise ValueError("flag counts differ")
    nx, ny = x.dim, y.dim
    if nx == 0 or ny == 0:
        return []
    positions = [
        (i, j)
        for i in range(ny)
        for j in range(nx)
        if deg_eq(y.degs[i], x.degs[j] + t, x.m)
    ]
    if not positions:
        return []
    rows = []
    for f in range(len(x.flags)):
        ychain = y.flag_chain(f)[1:-1]
        xchain = x.flag_chain(f)[1:-1]
        for xs, ysb in zip(xchain, ychain):
            quot = fq.complement_functionals(ysb, ny, y.q)
            if quot.size == 0 or xs.size == 0:
                continue
            # constraint: quot @ M @ xs == 0
            for u in quot:
                for vcol in xs.T:
                    row = np.zeros(len(positions), dtype=np.int64)
                    for k, (i, j) in enumerate(positions):
                        row[k] = (u[i] * vcol[j]) % x.q
                    if row.any():
                        rows.append(row)
    if rows:
        ker = fq.kernel_basis(np.array(rows, dtype=np.int64), x.q)
    else:
        ker = np.eye(len(positions), dtype=np.int64)
    out = []
    for col in ker.T:
        M = np.zeros((ny, nx), dtype=np.int64)
        for k, (i, j) in enumerate(positions):
            M[i, j] = col[k]
        out.append(M)
    return out


def hom_differential(x, y, t, basis_t, basis_t1):
    """Matrix of the Hom-complex differential Hom^t -> Hom^{t+1}."""
    sign = -1 if t % 2 else 1
    cols = []
    for M in basis_t:
        dM = (y.d @ M - sign * M @ x.d) % x.q
        cols.append(_coords_in_basis(dM, basis_t1, x.q))
    k1 = len(basis_t1)
    if not cols:
        return np.zeros((k1, 0), dtype=np.int64)
    return np.array(cols, dtype=np.int64).T % x.q


def _coords_in_basis(M: np.ndarray, basis: Sequence[np.ndarray], q: int) -> np.ndarray:
    if not basis:
        if np.any(M % q):
            raise ValueError("element outside span")
        return np.zeros(0, dtype=np.int64)
    A = np.stack([b.ravel() for b in basis], axis=1) % q
    return fq.solve(A, M.ravel() % q, q)


def hom_degree_window(x: FlaggedComplex, y: FlaggedComplex) -> list[int]:
    """Degrees where Hom(x, y) can be nonzero (all of Z/2m, or a finite window)."""
    if x.m > 0:
        return list(range(2 * x.m))
    if x.dim == 0 or y.dim == 0:
        return []
    lo = min(y.degs) - max(x.degs)
    hi = max(y.degs) - min(x.degs)
    return list(range(lo, hi + 1))


class HomComplex:
    """All homogeneous flag-preserving maps x -> y with the Hom differential."""

    def __init__(self, x: FlaggedComplex, y: FlaggedComplex):
        self.x = x
        self.y = y
        self.q = x.q
        self.m = x.m
        self._bases: dict[int, list[np.ndarray]] = {}

    def key(self, t: int) -> int:
        return t % (2 * self.m) if self.m > 0 else t

    def basis(self, t: int) -> list[np.ndarray]:
        k = self.key(t)
        if k not in self._bases:
            self._bases[k] = hom_basis(self.x, self.y, k)
        return self._bases[k]

    def differential(self, t: int) -> np.ndarray:
        return hom_differential(self.x, self.y, t, self.basis(t), self.basis(t + 1))

    def cocycles(self, t: int) -> np.ndarray:
        """Columns: coordinates of a basis of ker(d: Hom^t -> Hom^{t+1})."""
        dmat = self.differential(t)
        if dmat.shape[1] == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return fq.kernel_basis(dmat, self.q)

    def coboundaries(self, t: int) -> np.ndarray:
        """Columns: coordinates (in basis(t)) spanning the image from Hom^{t-1}."""
        prev = self.basis(t - 1)
        if not prev:
            return np.zeros((len(self.basis(t)), 0), dtype=np.int64)
        return hom_differential(self.x, self.y, t - 1, prev, self.basis(t))

    def ext_dim(self, t: int) -> int:
        nt = len(self.basis(t))
        if nt == 0:
            return 0
        rk_out = fq.rank(self.differential(t), self.q) if nt else 0
        bnd = self.coboundaries(t)
        rk_in = fq.rank(bnd, self.q) if bnd.size else 0
        return nt - rk_out - rk_in


@dataclass(frozen=True)
class ExtProfile:
    """dim Ext^i(x, y) per degree class; finitely supported when m = 0."""

    m: int
    dims: tuple[tuple[int, int], ...]  # sorted (degree, dim), zero dims omitted

    def dim(self, i: int) -> int:
        i = deg_reduce(i, self.m)
        for d, v in self.dims:
            if d == i:
                return v
        return 0

    def total(self) -> int:
        return sum(v for _, v in self.dims)

    def euler_range(self, degrees: Iterable[int]) -> int:
        """Sum of (-1)^i dim Ext^i over the given honest integers i."""
        return sum((-1) ** (i & 1) * self.dim(i) for i in degrees)

    def truncated_negative(self) -> int:
        """<x,y>_{<0} = sum_{i<0} (-1)^i dim Ext^i; only meaningful for m = 0."""
        if self.m != 0:
            raise ValueError("truncated negative pairing needs a Z-grading")
        return sum((-1) ** (d & 1) * v for d, v in self.dims if d < 0)


def ext_profile(x: FlaggedComplex, y: FlaggedComplex) -> ExtProfile:
    """Cohomology dimensions of the flag-preserving Hom complex."""
    hc = HomComplex(x, y)
    dims = []
    for t in hom_degree_window(x, y):
        v = hc.ext_dim(t)
        if v:
            dims.append((t, v))
    return ExtProfile(x.m, tuple(sorted(dims)))


# ---------------------------------------------------------------------------
# endomorphism algebras, automorphism counts
# ---------------------------------------------------------------------------

DEFAULT_AUT_CAP = 10


def _aut_cap() -> int:
    import os

    return int(os.environ.get("CYCOUNT_MAX_DIM", DEFAULT_AUT_CAP))


class H0Algebra:
    """H^0 of an endomorphism complex with its induced multiplication."""

    def __init__(self, hom: HomComplex):
        self.q = hom.q
        basis0 = hom.basis(0)
        cyc = hom.cocycles(0)
        bnd = hom.coboundaries(0)
        self._basis0 = basis0
        rk_b = fq.rank(bnd, self.q) if bnd.size else 0
        # complete coboundaries to cocycles; the fresh columns represent H^0
        reps_coords = []
        if cyc.size:
            cur = bnd if bnd.size else np.zeros((cyc.shape[0], 0), dtype=np.int64)
            cur_rank = rk_b
            for j in range(cyc.shape[1]):
                v = cyc[:, j : j + 1]
                test = np.hstack([cur, v])
                r = fq.rank(test, self.q)
                if r > cur_rank:
                    reps_coords.append(v[:, 0])
                    cur = test
                    cur_rank = r
        self.dim = len(reps_coords)
        self._bnd = bnd if bnd.size else np.zeros((len(basis0), 0), dtype=np.int64)
        self._rep_coords = (
            np.stack(reps_coords, axis=1)
            if reps_coords
            else np.zeros((len(basis0), 0), dtype=np.int64)
        )
        self.reps = [self._matrix_from_coords(self._rep_coords[:, j]) for j in range(self.dim)]
        self._mult = self._structure_tensor()

    def _matrix_from_coords(self, coords: np.ndarray) -> np.ndarray:
        if not self._basis0:
            return np.zeros((0, 0), dtype=np.int64)
        out = np.zeros_like(self._basis0[0])
        for c, M in zip(coords, self._basis0):
            out = (out + int(c) * M) % self.q
        return out

    def class_coords(self, M: np.ndarray) -> np.ndarray:
        """Coordinates of the H^0 class of a cocycle matrix M."""
        coords = _coords_in_basis(M, self._basis0, self.q)
        A = np.hstack([self._rep_coords, self._bnd])
        if A.shape[1] == 0:
            return np.zeros(0, dtype=np.int64)
        sol = fq.solve(A, coords, self.q)
        return sol[: self.dim]

    def _structure_tensor(self) -> np.ndarray:
        r = self.dim
        T = np.zeros((r, r, r), dtype=np.int64)
        for i in range(r):
            for j in range(r):
                prod = (self.reps[i] @ self.reps[j]) % self.q
                T[i, j] = self.class_coords(prod)
        return T

    def unit_count(self) -> int:
        """Number of invertible elements, by brute force over all q^dim elements."""
        r = self.dim
        if r == 0:
            return 1
        if r > _aut_cap():
            raise ResourceCapError(
                f"H^0(End) dimension {r} exceeds cap {_aut_cap()} "
                "(raise CYCOUNT_MAX_DIM to override)"
            )
        q = self.q
        # left-multiplication matrices: L_v[k, j] = sum_i v_i T[i, j, k]
        L = self._mult.transpose(0, 2, 1)  # (i, k, j)
        coords = np.array(
            list(itertools.product(range(q), repeat=r)), dtype=np.int64
        )
        stack = np.tensordot(coords, L, axes=(1, 0)) % q  # (B, k, j)
        return fq.batched_invertible_count(stack, q)


def end_algebra(x: FlaggedComplex) -> H0Algebra:
    return H0Algebra(HomComplex(x, x))


def aut_order(x: FlaggedComplex) -> int:
    """|Aut(x)|: units of the finite algebra H^0(End(x))."""
    if x.dim == 0:
        return 1
    return end_algebra(x).unit_count()


# ---------------------------------------------------------------------------
# Barannikov normal form and classification
# ---------------------------------------------------------------------------


def barannikov_form(
    rho: Ruling, points: GradedPointSet, q: int, flags: int = 1
) -> FlaggedComplex:
    """The normal-form object C_rho: one basis vector per point, coordinate
    flag(s), differential d(e_t) = e_s for each pair {s, t}."""
    if not rho.is_valid_for(points):
        raise ValueError(f"{rho} is not a ruling of {points}")
    n = len(points)
    d = np.zeros((n, n), dtype=np.int64)
    for s, t in rho.pairs:
        d[s - 1, t - 1] = 1
    eye = np.eye(n, dtype=np.int64)
    flag = tuple(eye[:, : k + 1] for k in range(n - 1))
    return FlaggedComplex(
        q, points.m, points.degrees, d, (flag,) * flags, (points,) * flags
    )


def classify_to_ruling(x: FlaggedComplex, which_flag: int = 0) -> Ruling:
    """The unique ruling rho with x isomorphic to C_rho, by persistence pairing.

    Steps of the chosen flag are refined to a homogeneous adapted basis;
    the standard left-to-right column reduction of the differential pairs
    basis vectors, and pairs crossing piece boundaries descend to the step
    pairing.  Deterministic: steps in increasing order, each lower pair
    index is the smallest available.
    """
    n = x.dim
    if n == 0:
        return Ruling(())
    A, sizes = adapted_basis(x, which_flag)
    D = (_inv_mod(A, x.q) @ x.d @ A) % x.q
    q = x.q
    # column reduction: lows must become distinct
    low_of_col: dict[int, int] = {}
    col_with_low: dict[int, int] = {}
    R = D.copy()
    inv = fq.inverse_table(q)
    for j in range(n):
        while True:
            nz = np.nonzero(R[:, j])[0]
            if nz.size == 0:
                break
            low = int(nz[-1])
            other = col_with_low.get(low)
            if other is None:
                col_with_low[low] = j
                low_of_col[j] = low
                break
            factor = (R[low, j] * inv[R[low, other]]) % q
            R[:, j] = (R[:, j] - factor * R[:, other]) % q
    # map basis indices to flag steps
    step_of = []
    for s, size in enumerate(sizes):
        step_of.extend([s] * size)
    used = set()
    pairs = []
    for j, low in sorted(low_of_col.items()):
        s_step, t_step = step_of[low], step_of[j]
        if s_step == t_step:
            continue  # internal to a fat piece
        pairs.append((s_step + 1, t_step + 1))
        used.add(s_step)
        used.add(t_step)
    bdry = x.boundaries[which_flag]
    if len(used) != len(bdry) or len(pairs) * 2 != len(bdry):
        raise ValueError("object does not satisfy the rank-1 piece condition")
    rho = Ruling(tuple(pairs))
    if not rho.is_valid_for(bdry):
        raise ValueError("pairing violates the degree condition; not a C1 object")
    return rho


# ---------------------------------------------------------------------------
# gamma and homotopy cardinality
# ---------------------------------------------------------------------------


def gamma(x: FlaggedComplex, target_hom_h0_rank: int, n: int = 2) -> int:
    """CY-weight exponent of an object under a functor with even CY dimension n.

    The rank correction rk(Ext^n(x,x)^v -> Ext^0(x,x)) equals
    dim Ext^0(x,x) - rk(Ext^0(x,x) -> Ext^0 of the target), so the caller
    supplies that target rank and no CY pairing is ever constructed.
    """
    if n % 2:
        raise ValueError("gamma is defined for even CY dimensions")
    prof = ext_profile(x, x)
    e0 = prof.dim(0)
    rank_term = e0 - target_hom_h0_rank
    if rank_term < 0:
        raise ValueError("target rank exceeds dim Ext^0")
    if n >= 0:
        euler = sum((-1) ** (i & 1) * prof.dim(i) for i in range(0, n))
    else:
        euler = -sum((-1) ** (i & 1) * prof.dim(i) for i in range(n, 0))
    return euler + rank_term


def hcard_locally_finite(profile: ExtProfile, aut: int, q: int):
    """Single-object homotopy-cardinality term q^{-<x,x>_{<0}} / |Aut(x)|."""
    from .quadext import QuadExt

    if profile.m != 0:
        raise ValueError("homotopy cardinality needs a Z-graded (m = 0) profile")
    expo = -profile.truncated_negative()
    return QuadExt.sqrt_q_pow(q, 2 * expo) / QuadExt.rational(q, aut)
