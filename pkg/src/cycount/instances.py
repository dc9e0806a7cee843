"""
Two desk-scale odd Calabi-Yau category models, from explicit F_q algebra.

Stable Nakayama: the stable module category of F_q[t]/(t^N) for N >= 2,
with shift the inverse syzygy; it is (-1)CY and 2-periodic.  Iso-classes
are multisets of uniserial modules M_a = R/(t^a), 1 <= a <= N-1; stable
Hom spaces, syzygies, Yoneda compositions and pushout cones are all
computed on explicit matrices over the truncated polynomial ring.

Root nilpotent: the 2-periodic derived category of nilpotent one-loop
quiver representations over F_q, a 1CY model.  Iso-classes are pairs of
partitions (H^0, H^1); morphisms are 2x2 matrices of module maps and
extension cocycles, with odd-odd compositions vanishing; cones come from
the six-term homology sequence (an implementer-level derivation, gated
by the independent mapping-cone oracle below).

Partitions are decreasing tuples; nilpotent modules are explicit Jordan
matrices and iso-classification is by ranks of powers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import fq
from .complexes import ResourceCapError
from .hall import CategoryModel

# ---------------------------------------------------------------------------
# partitions and nilpotent matrices
# ---------------------------------------------------------------------------


def normalize_partition(parts) -> tuple[int, ...]:
    return tuple(sorted((p for p in parts if p), reverse=True))


def partition_size(lam) -> int:
    return sum(lam)


def jordan_matrix(lam) -> np.ndarray:
    """Nilpotent matrix in Jordan form for the partition lam (t e_j = e_{j+1})."""
    n = partition_size(lam)
    T = np.zeros((n, n), dtype=np.int64)
    pos = 0
    for part in lam:
        for j in range(part - 1):
            T[pos + j + 1, pos + j] = 1
        pos += part
    return T


def nilpotent_type(T: np.ndarray, q: int) -> tuple[int, ...]:
    """Partition of a nilpotent matrix from the ranks of its powers."""
    n = T.shape[0]
    if n == 0:
        return ()
    ranks = [n]
    P = np.eye(n, dtype=np.int64)
    while True:
        P = (P @ T) % q
        r = fq.rank(P, q)
        ranks.append(r)
        if r == 0:
            break
    # m_k = multiplicity of part k: ranks[k-1] - 2 ranks[k] + ranks[k+1]
    ranks.append(0)
    parts = []
    for k in range(1, len(ranks) - 1):
        mult = ranks[k - 1] - 2 * ranks[k] + ranks[k + 1]
        parts.extend([k] * mult)
    return normalize_partition(parts)


def module_hom_basis(TM, TN, q) -> list[np.ndarray]:
    """Basis of module maps M -> N: matrices H with H T_M = T_N H."""
    a, b = TM.shape[0], TN.shape[0]
    if a == 0 or b == 0:
        return []
    # vectorize: (I (x) TN - TM^T (x) I) vec(H) = 0
    A = np.kron(np.eye(a, dtype=np.int64), TN) - np.kron(TM.T, np.eye(b, dtype=np.int64))
    ker = fq.kernel_basis(A % q, q)
    return [ker[:, j].reshape(a, b).T % q for j in range(ker.shape[1])]


def aut_order_formula(lam, q: int) -> int:
    """|Aut(M_lam)| by the classical formula q^{sum conj^2} prod (1-q^-t)."""
    if not lam:
        return 1
    conj = conjugate_partition(lam)
    power = sum(c * c for c in conj)
    mults: dict[int, int] = {}
    for part in lam:
        mults[part] = mults.get(part, 0) + 1
    out = q**power
    for m_j in mults.values():
        for t in range(1, m_j + 1):
            out = out * (q**t - 1) // q**t
    return out


def conjugate_partition(lam) -> tuple[int, ...]:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > i) for i in range(lam[0]))


# ---------------------------------------------------------------------------
# stable Nakayama model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NakDelta:
    """An element of Ext^1(z, x) in the stable Nakayama model: a stable map
    Omega z -> x given by an explicit matrix."""

    z: tuple
    x: tuple
    mat: bytes
    shape: tuple[int, int]

    def matrix(self) -> np.ndarray:
        return np.frombuffer(self.mat, dtype=np.int64).reshape(self.shape).copy()


MAX_EXT1_COUNT = 1 << 14


class StableNakayama(CategoryModel):
    """Stable module category of F_q[t]/(t^N); (-1)CY, 2-periodic (m = 1)."""

    def __init__(self, q: int, N: int, size_bound: int = 24):
        fq.check_prime(q)
        if N < 2 or N > 6:
            raise ResourceCapError("stable Nakayama bound: 2 <= N <= 6")
        self.q = q
        self.N = N
        self.n = -1
        self.m = 1
        self.zero = ()
        self.size_bound = size_bound

    # labels are partitions with parts in 1..N-1
    def check_label(self, lam):
        lam = normalize_partition(lam)
        if lam and lam[0] >= self.N:
            raise ValueError("parts must be < N in the stable category")
        return lam

    def size(self, lam) -> int:
        return partition_size(lam)

    def direct_sum(self, x, y):
        return normalize_partition(tuple(x) + tuple(y))

    def indecomposables(self):
        return [(a,) for a in range(1, self.N)]

    def omega_label(self, lam):
        return normalize_partition(self.N - p for p in lam)

    # -- linear realizations ------------------------------------------

    def _T(self, lam):
        return jordan_matrix(lam)

    @lru_cache(maxsize=None)
    def _hom_all(self, z, x):
        return module_hom_basis(self._T(z), self._T(x), self.q)

    @lru_cache(maxsize=None)
    def _proj_maps(self, z, x):
        """Basis of Hom(M_z, M_x) factoring through a free module."""
        q = self.q
        s = len(z)
        if s == 0 or not x:
            return []
        free = (self.N,) * s
        Tf = self._T(free)
        # cover pi: R^s -> M_z and section s0 with pi s0 = id (linear only)
        pi = _cover_matrix(z, self.N)
        span = []
        for u in module_hom_basis(self._T(z), Tf, q):
            for v in module_hom_basis(Tf, self._T(x), q):
                span.append(((v @ u) % q).ravel())
        if not span:
            return []
        A = np.stack(span, axis=1) % q
        keep = _column_space_basis(A, q)
        nz, nx = partition_size(z), partition_size(x)
        return [A[:, j].reshape(nx, nz) % q for j in keep]

    @lru_cache(maxsize=None)
    def _stable_basis(self, z, x):
        """Stable Hom basis: representatives completing P(z,x) inside Hom."""
        q = self.q
        full = self._hom_all(z, x)
        proj = self._proj_maps(z, x)
        if not full:
            return []
        pcols = (
            np.stack([p.ravel() for p in proj], axis=1)
            if proj
            else np.zeros((full[0].size, 0), dtype=np.int64)
        )
        reps = []
        cur = pcols
        rank = fq.rank(cur, q) if cur.size else 0
        for H in full:
            v = H.ravel().reshape(-1, 1) % q
            test = np.hstack([cur, v])
            r = fq.rank(test, q)
            if r > rank:
                reps.append(H)
                cur, rank = test, r
        return reps

    @lru_cache(maxsize=None)
    def _proj_cols(self, z, x):
        proj = self._proj_maps(z, x)
        nz, nx = partition_size(z), partition_size(x)
        if not proj:
            return np.zeros((nz * nx, 0), dtype=np.int64)
        return np.stack([p.ravel() for p in proj], axis=1) % self.q

    def stable_coords(self, z, x, H) -> np.ndarray:
        """Coordinates of a map in the stable basis (mod projectives)."""
        reps = self._stable_basis(z, x)
        if not reps:
            if _nonzero_mod_span(H, self._proj_cols(z, x), self.q):
                raise ValueError("map not in the projective span")
            return np.zeros(0, dtype=np.int64)
        A = np.hstack(
            [np.stack([r.ravel() for r in reps], axis=1), self._proj_cols(z, x)]
        )
        sol = fq.solve(A % self.q, H.ravel() % self.q, self.q)
        return sol[: len(reps)]

    def ext_dim(self, i, z, x) -> int:
        zz = self.omega_label(z) if i % 2 else z
        return len(self._stable_basis(zz, x))

    # -- syzygy functor -----------------------------------------------

    def omega_map(self, z, x, H) -> np.ndarray:
        """Omega(H): Omega z -> Omega x for a module map H: M_z -> M_x."""
        q = self.q
        oz, ox = self.omega_label(z), self.omega_label(x)
        pi_z, iota_z = _cover_matrix(z, self.N), _syzygy_embedding(z, self.N)
        pi_x, iota_x = _cover_matrix(x, self.N), _syzygy_embedding(x, self.N)
        sec_x = _cover_section(x, self.N)
        # lift: F(gen) = section(H(pi(gen))) extended as a module map
        Tfz = self._T((self.N,) * len(z))
        Tfx = self._T((self.N,) * len(x))
        F = _free_map_from_generators(
            ((sec_x @ H @ pi_z) % q), z, x, self.N, q
        )
        img = (F @ iota_z) % q
        w = fq.solve(iota_x, img, q)
        return w % q

    # -- Ext elements, composition, cones ------------------------------

    def ext1_elements(self, z, x):
        reps = self._stable_basis(self.omega_label(z), x)
        k = len(reps)
        if self.q**k > MAX_EXT1_COUNT:
            raise ResourceCapError(f"Ext^1 too large to enumerate: q^{k}")
        oz = self.omega_label(z)
        rows = partition_size(x)
        cols = partition_size(oz)
        for coords in itertools.product(range(self.q), repeat=k):
            M = np.zeros((rows, cols), dtype=np.int64)
            for c, H in zip(coords, reps):
                M = (M + c * H) % self.q
            yield NakDelta(z, x, M.tobytes(), (rows, cols))

    def cone(self, delta: NakDelta):
        """Pushout of 0 -> Omega z -> P(z) -> z -> 0 along delta."""
        q = self.q
        z, x = delta.z, delta.x
        g = delta.matrix()
        s = len(z)
        if s == 0:
            return self.check_label(x)
        iota = _syzygy_embedding(z, self.N)
        free = (self.N,) * s
        Tf, Tx = self._T(free), self._T(x)
        nf, nx = Tf.shape[0], Tx.shape[0]
        big_T = np.zeros((nf + nx, nf + nx), dtype=np.int64)
        big_T[:nf, :nf] = Tf
        big_T[nf:, nf:] = Tx
        sub = np.vstack([iota, (-g) % q]) % q  # columns (iota v, -g v)
        quot = fq.complement_functionals(sub, nf + nx, q)
        # induced t-action on the quotient
        basis = _preimage_basis(quot, q)
        tq = fq.solve((quot @ basis) % q, (quot @ big_T @ basis) % q, q)
        lam = nilpotent_type(tq % q, q)
        return normalize_partition(p for p in lam if p < self.N)

    def compose(self, i, j, y, zlab, g_mat, xlab, f_mat):
        """Yoneda product Ext^i(y,z) x Ext^j(x,y) -> Ext^{i+j}(x,z).

        g_mat: Omega^i y -> z;  f_mat: Omega^j x -> y.  The composite is
        g . Omega^i(f): Omega^{i+j} x -> z, with Omega reduced mod 2.
        """
        q = self.q
        i2, j2 = i % 2, j % 2
        src_f = self.omega_label(xlab) if j2 else xlab
        f = f_mat
        if i2:
            f = self.omega_map(src_f, y, f_mat)
        return (g_mat @ f) % q

    def r_rank(self, i, delta: NakDelta) -> int:
        """rk of (a, b) -> a delta + (-1)^{i-1} delta b into Ext^i(z, x)."""
        q = self.q
        z, x = delta.z, delta.x
        i2 = i % 2
        target = self._stable_basis(self.omega_label(z) if i2 else z, x)
        if not target:
            return 0
        rows = []
        for a in self._stable_basis(self.omega_label(x) if (i - 1) % 2 else x, x):
            comp = self.compose(i - 1, 1, x, x, a, z, delta.matrix())
            rows.append(self._coords_ext(i, z, x, comp))
        for b in self._stable_basis(self.omega_label(z) if (i - 1) % 2 else z, z):
            comp = self.compose(1, i - 1, z, x, delta.matrix(), z, b)
            rows.append(self._coords_ext(i, z, x, comp))
        if not rows:
            return 0
        return fq.rank(np.stack(rows, axis=0) % q, q)

    def _coords_ext(self, i, z, x, mat):
        src = self.omega_label(z) if i % 2 else z
        return self.stable_coords(src, x, mat)

    def aut_order(self, lam) -> int:
        """Units of the stable endomorphism algebra."""
        q = self.q
        reps = self._stable_basis(lam, lam)
        r = len(reps)
        if r == 0:
            return 1
        import os

        cap = int(os.environ.get("CYCOUNT_MAX_DIM", 10))
        if r > cap:
            raise ResourceCapError(f"stable End dimension {r} exceeds cap")
        T = np.zeros((r, r, r), dtype=np.int64)
        for a in range(r):
            for b in range(r):
                T[a, b] = self.stable_coords(lam, lam, (reps[a] @ reps[b]) % q)
        L = T.transpose(0, 2, 1)
        coords = np.array(list(itertools.product(range(q), repeat=r)), dtype=np.int64)
        stack = np.tensordot(coords, L, axes=(1, 0)) % q
        return fq.batched_invertible_count(stack, q)


def _cover_matrix(lam, N) -> np.ndarray:
    """pi: R^s -> M_lam, generator of block i to generator of block i."""
    s = len(lam)
    n = partition_size(lam)
    pi = np.zeros((n, s * N), dtype=np.int64)
    pos = 0
    for i, part in enumerate(lam):
        for j in range(part):
            pi[pos + j, i * N + j] = 1
        pos += part
    return pi


def _cover_section(lam, N) -> np.ndarray:
    """Linear section of the cover (not a module map)."""
    s = len(lam)
    n = partition_size(lam)
    sec = np.zeros((s * N, n), dtype=np.int64)
    pos = 0
    for i, part in enumerate(lam):
        for j in range(part):
            sec[i * N + j, pos + j] = 1
        pos += part
    return sec


def _syzygy_embedding(lam, N) -> np.ndarray:
    """iota: M_{Omega lam} -> R^s, block generator to t^{lam_i} gen_i.

    Blocks are emitted by ascending part of lam so that the embedded
    basis realizes jordan_matrix of the normalized syzygy label."""
    s = len(lam)
    cols = []
    for i in sorted(range(s), key=lambda idx: lam[idx]):
        part = lam[i]
        for j in range(N - part):
            col = np.zeros(s * N, dtype=np.int64)
            col[i * N + part + j] = 1
            cols.append(col)
    if not cols:
        return np.zeros((s * N, 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def _free_map_from_generators(vals, z, x, N, q) -> np.ndarray:
    """Module map R^{s_z} -> R^{s_x} with prescribed generator images.

    vals: columns are images (in R^{s_x} coordinates) of the generators;
    actually vals is the composite sec_x H pi_z on all of R^{s_z}, and we
    read the generator columns out of it.
    """
    s_z = len(z)
    s_x = len(x)
    Tf_x = jordan_matrix((N,) * s_x)
    F = np.zeros((s_x * N, s_z * N), dtype=np.int64)
    for i in range(s_z):
        gen_col = vals[:, i * N]
        img = gen_col.copy()
        for j in range(N):
            F[:, i * N + j] = img
            img = (Tf_x @ img) % q
    return F % q


def _column_space_basis(A, q):
    keep = []
    cur = np.zeros((A.shape[0], 0), dtype=np.int64)
    rank = 0
    for j in range(A.shape[1]):
        test = np.hstack([cur, A[:, j : j + 1]])
        r = fq.rank(test, q)
        if r > rank:
            keep.append(j)
            cur, rank = test, r
    return keep


def _nonzero_mod_span(H, cols, q) -> bool:
    v = H.ravel().reshape(-1, 1) % q
    if not v.any():
        return False
    if cols.size == 0:
        return True
    return fq.rank(np.hstack([cols, v]), q) > fq.rank(cols, q)


def _preimage_basis(quot, q):
    """Columns mapping to the standard basis of the quotient coordinates."""
    return fq.solve(quot % q, np.eye(quot.shape[0], dtype=np.int64), q)


def build_stable_nakayama(q: int, m: int) -> StableNakayama:
    """Model of the stable module category of F_q[t]/(t^m); n = -1."""
    return StableNakayama(q, m)


# ---------------------------------------------------------------------------
# root category of nilpotent representations (1CY)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NilDelta:
    """Ext^1 element in the root-nilpotent model: cocycle quadruple
    (e: Z0 -> X0, f: Z0 -> X1, g: Z1 -> X0, e': Z1 -> X1); e, e' are
    linear cocycles for heart extensions, f, g are module maps."""

    z: tuple
    x: tuple
    e: bytes
    f: bytes
    g: bytes
    e2: bytes

    def part(self, name, zlab, xlab):
        src = partition_size(zlab)
        dst = partition_size(xlab)
        raw = getattr(self, name)
        return np.frombuffer(raw, dtype=np.int64).reshape(dst, src).copy()


class RootNilpotent(CategoryModel):
    """2-periodic derived category of nilpotent Jordan-quiver modules; 1CY."""

    def __init__(self, q: int, size_bound: int = 6):
        fq.check_prime(q)
        if size_bound > 8:
            raise ResourceCapError("root-nilpotent bound: size_bound <= 8")
        self.q = q
        self.n = 1
        self.m = 1
        self.zero = ((), ())
        self.size_bound = size_bound

    def check_label(self, pair):
        lam0, lam1 = pair
        return (normalize_partition(lam0), normalize_partition(lam1))

    def size(self, pair) -> int:
        return partition_size(pair[0]) + partition_size(pair[1])

    def direct_sum(self, a, b):
        return (
            normalize_partition(tuple(a[0]) + tuple(b[0])),
            normalize_partition(tuple(a[1]) + tuple(b[1])),
        )

    def stalk(self, lam, degree: int):
        lam = normalize_partition(lam)
        return (lam, ()) if degree % 2 == 0 else ((), lam)

    # -- heart linear algebra -------------------------------------------

    @lru_cache(maxsize=None)
    def hom_basis(self, a, b):
        return module_hom_basis(jordan_matrix(a), jordan_matrix(b), self.q)

    @lru_cache(maxsize=None)
    def _cob_cols(self, a, b):
        """Coboundary columns T_b h - h T_a inside Hom_k(M_a, M_b)."""
        q = self.q
        na, nb = partition_size(a), partition_size(b)
        Ta, Tb = jordan_matrix(a), jordan_matrix(b)
        cols = []
        for i in range(nb):
            for j in range(na):
                h = np.zeros((nb, na), dtype=np.int64)
                h[i, j] = 1
                cols.append(((Tb @ h - h @ Ta) % q).ravel())
        if not cols:
            return np.zeros((nb * na if nb * na else 0, 0), dtype=np.int64)
        return np.stack(cols, axis=1) % q

    @lru_cache(maxsize=None)
    def ext1_basis(self, a, b):
        """Representative cocycles spanning Ext^1_A(M_a, M_b)."""
        q = self.q
        na, nb = partition_size(a), partition_size(b)
        if na == 0 or nb == 0:
            return []
        cob = self._cob_cols(a, b)
        reps = []
        cur = cob
        rank = fq.rank(cur, q) if cur.size else 0
        for i in range(nb):
            for j in range(na):
                h = np.zeros((nb, na), dtype=np.int64)
                h[i, j] = 1
                v = h.ravel().reshape(-1, 1)
                test = np.hstack([cur, v])
                r = fq.rank(test, q)
                if r > rank:
                    reps.append(h)
                    cur, rank = test, r
        return reps

    def ext1_coords(self, a, b, phi) -> np.ndarray:
        reps = self.ext1_basis(a, b)
        if not reps:
            if _nonzero_mod_span(phi, self._cob_cols(a, b), self.q):
                raise ValueError("cocycle outside the coboundary span")
            return np.zeros(0, dtype=np.int64)
        A = np.hstack(
            [np.stack([r.ravel() for r in reps], axis=1), self._cob_cols(a, b)]
        )
        sol = fq.solve(A % self.q, phi.ravel() % self.q, self.q)
        return sol[: len(reps)]

    def hom_coords(self, a, b, H) -> np.ndarray:
        reps = self.hom_basis(a, b)
        if not reps:
            if np.any(H % self.q):
                raise ValueError("nonzero map in zero Hom space")
            return np.zeros(0, dtype=np.int64)
        A = np.stack([r.ravel() for r in reps], axis=1)
        return fq.solve(A % self.q, H.ravel() % self.q, self.q)

    def heart_ext_dim(self, a, b) -> int:
        return len(self.ext1_basis(a, b))

    def heart_hom_dim(self, a, b) -> int:
        return len(self.hom_basis(a, b))

    # -- graded Ext data --------------------------------------------------

    def _block_dims(self, i, z, x):
        """Component spec of Ext^i(z, x): [(name, src, dst, kind), ...] with
        kind 0 = module map, 1 = extension cocycle."""
        z0, z1 = z
        x0, x1 = x
        out = []
        for dst_deg, dst in ((0, x0), (1, x1)):
            for src_deg, src in ((0, z0), (1, z1)):
                k = (i + src_deg - dst_deg) % 2
                out.append(((dst_deg, src_deg), src, dst, k))
        return out

    def ext_dim(self, i, z, x) -> int:
        total = 0
        for _, src, dst, kind in self._block_dims(i, z, x):
            total += (
                self.heart_hom_dim(src, dst)
                if kind == 0
                else self.heart_ext_dim(src, dst)
            )
        return total

    def ext1_elements(self, z, x):
        z = self.check_label(z)
        x = self.check_label(x)
        z0, z1 = z
        x0, x1 = x
        e_reps = self.ext1_basis(z0, x0)
        f_reps = self.hom_basis(z0, x1)
        g_reps = self.hom_basis(z1, x0)
        e2_reps = self.ext1_basis(z1, x1)
        k = len(e_reps) + len(f_reps) + len(g_reps) + len(e2_reps)
        if self.q**k > MAX_EXT1_COUNT:
            raise ResourceCapError(f"Ext^1 too large to enumerate: q^{k}")

        def lincomb(reps, coords, rows, cols):
            M = np.zeros((rows, cols), dtype=np.int64)
            for c, H in zip(coords, reps):
                M = (M + c * H) % self.q
            return M

        sizes = [len(e_reps), len(f_reps), len(g_reps), len(e2_reps)]
        for coords in itertools.product(range(self.q), repeat=k):
            c_e = coords[: sizes[0]]
            c_f = coords[sizes[0] : sizes[0] + sizes[1]]
            c_g = coords[sizes[0] + sizes[1] : sizes[0] + sizes[1] + sizes[2]]
            c_e2 = coords[sizes[0] + sizes[1] + sizes[2] :]
            e = lincomb(e_reps, c_e, partition_size(x0), partition_size(z0))
            f = lincomb(f_reps, c_f, partition_size(x1), partition_size(z0))
            g = lincomb(g_reps, c_g, partition_size(x0), partition_size(z1))
            e2 = lincomb(e2_reps, c_e2, partition_size(x1), partition_size(z1))
            yield NilDelta(
                z, x, e.tobytes(), f.tobytes(), g.tobytes(), e2.tobytes()
            )

    # -- cones ------------------------------------------------------------

    def cone(self, delta: NilDelta):
        """Cone from the six-term homology sequence: H^0(C) extends ker f
        by coker g with class the push-pull of e; H^1(C) extends ker g by
        coker f with class from e'."""
        q = self.q
        z0, z1 = delta.z
        x0, x1 = delta.x
        e = delta.part("e", z0, x0)
        f = delta.part("f", z0, x1)
        g = delta.part("g", z1, x0)
        e2 = delta.part("e2", z1, x1)
        h0 = self._connecting_extension(z0, x0, x1, z1, e, f, g)
        h1 = self._connecting_extension(z1, x1, x0, z0, e2, g, f)
        return (h0, h1)

    def _connecting_extension(self, zdeg, xdeg, f_target, g_source, e, f, g):
        """Partition of the extension of ker(f) by coker(g) with class the
        pull-push of e along the kernel inclusion and cokernel projection."""
        q = self.q
        Tz = jordan_matrix(zdeg)
        Tx = jordan_matrix(xdeg)
        ker = fq.kernel_basis(f % q, q)  # submodule of M_z
        # t-action on ker f
        t_ker = fq.solve(ker, (Tz @ ker) % q, q) if ker.size else np.zeros((0, 0), dtype=np.int64)
        quot = fq.complement_functionals(g % q, partition_size(xdeg), q)
        if quot.size:
            basis = _preimage_basis(quot, q)
            t_cok = fq.solve((quot @ basis) % q, (quot @ Tx @ basis) % q, q)
        else:
            basis = np.zeros((partition_size(xdeg), 0), dtype=np.int64)
            t_cok = np.zeros((0, 0), dtype=np.int64)
        # class of the induced extension: project e, restrict to the kernel
        if quot.size and ker.size:
            e_red = fq.solve((quot @ basis) % q, (quot @ e @ ker) % q, q)
        else:
            e_red = np.zeros((t_cok.shape[0], t_ker.shape[0]), dtype=np.int64)
        nk, nc = t_ker.shape[0], t_cok.shape[0]
        T = np.zeros((nc + nk, nc + nk), dtype=np.int64)
        T[:nc, :nc] = t_cok
        T[nc:, nc:] = t_ker
        T[:nc, nc:] = e_red
        return nilpotent_type(T % q, q)

    # -- composition and ranks ---------------------------------------------

    def _compose_blocks(self, i, j, mid, u, v, z, x):
        """Composite of u in Ext^i(mid, x) and v in Ext^j(z, mid).

        u, v are dicts {(dst_deg, src_deg): (matrix, kind)}; returns the
        same encoding for u v in Ext^{i+j}(z, x); odd-odd products vanish.
        """
        q = self.q
        out = {}
        for (a, b), (Mu, ku) in u.items():
            for (b2, c), (Mv, kv) in v.items():
                if b != b2:
                    continue
                if ku == 1 and kv == 1:
                    continue
                key = (a, c)
                M = (Mu @ Mv) % q
                kind = ku + kv
                prev = out.get(key)
                if prev is None:
                    out[key] = [M, kind]
                else:
                    if prev[1] != kind:
                        raise AssertionError("mixed kinds in one block")
                    prev[0] = (prev[0] + M) % q
        return {k: (m, kind) for k, (m, kind) in out.items()}

    def _delta_blocks(self, delta: NilDelta):
        z0, z1 = delta.z
        x0, x1 = delta.x
        return {
            (0, 0): (delta.part("e", z0, x0), 1),
            (1, 0): (delta.part("f", z0, x1), 0),
            (0, 1): (delta.part("g", z1, x0), 0),
            (1, 1): (delta.part("e2", z1, x1), 1),
        }

    def _ext_element_blocks(self, i, y, coords_reps):
        return coords_reps

    def _ext_basis_blocks(self, i, z, x):
        """Basis of Ext^i(z, x) as block dicts, plus a coordinate reader."""
        blocks = self._block_dims(i, z, x)
        basis = []
        for (dst_deg, src_deg), src, dst, kind in blocks:
            reps = (
                self.hom_basis(src, dst) if kind == 0 else self.ext1_basis(src, dst)
            )
            for H in reps:
                basis.append({(dst_deg, src_deg): (H, kind)})
        return basis

    def _coords_of_blocks(self, i, z, x, blocks):
        out = []
        for (dst_deg, src_deg), src, dst, kind in self._block_dims(i, z, x):
            M = None
            for (a, c), (mat, k2) in blocks.items():
                if (a, c) == (dst_deg, src_deg):
                    M = mat
            rows, cols = partition_size(dst), partition_size(src)
            if M is None:
                M = np.zeros((rows, cols), dtype=np.int64)
            out.append(
                self.hom_coords(src, dst, M)
                if kind == 0
                else self.ext1_coords(src, dst, M)
            )
        return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)

    def r_rank(self, i, delta: NilDelta) -> int:
        q = self.q
        z, x = delta.z, delta.x
        dblocks = self._delta_blocks(delta)
        rows = []
        for a in self._ext_basis_blocks(i - 1, x, x):
            comp = self._compose_blocks(i - 1, 1, x, a, dblocks, z, x)
            rows.append(self._coords_of_blocks(i, z, x, comp))
        for b in self._ext_basis_blocks(i - 1, z, z):
            comp = self._compose_blocks(1, i - 1, z, dblocks, b, z, x)
            rows.append(self._coords_of_blocks(i, z, x, comp))
        if not rows:
            return 0
        mat = np.stack(rows, axis=0) % q
        return fq.rank(mat, q) if mat.size else 0

    def aut_order(self, pair) -> int:
        """|Aut| = |Aut(H^0)| |Aut(H^1)| q^{dim Ext^1(H^0,H^1) + dim Ext^1(H^1,H^0)}."""
        lam0, lam1 = self.check_label(pair)
        cross = self.heart_ext_dim(lam0, lam1) + self.heart_ext_dim(lam1, lam0)
        return (
            aut_order_formula(lam0, self.q)
            * aut_order_formula(lam1, self.q)
            * self.q**cross
        )


def build_root_nilpotent(q: int, size_bound: int = 6) -> RootNilpotent:
    return RootNilpotent(q, size_bound)


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------


def submodule_reps(lam, q):
    """All t-invariant subspaces of M_lam, as column bases."""
    from .augcount import _subspace_reps

    T = jordan_matrix(lam)
    n = partition_size(lam)
    for w in range(n + 1):
        for rows in _subspace_reps(n, w, q):
            cols = rows.T % q
            probe = np.hstack([cols, (T @ cols) % q])
            if fq.rank(probe, q) == w:
                yield cols


def classical_hall_numbers(q: int, z, x, y) -> int:
    """|{x' <= M_y : x' = M_x, M_y/x' = M_z}| by exhausting t-invariant
    subspaces."""
    z = normalize_partition(z)
    x = normalize_partition(x)
    y = normalize_partition(y)
    if partition_size(y) != partition_size(x) + partition_size(z):
        return 0
    if partition_size(y) > 6:
        raise ResourceCapError("classical Hall oracle bound: |y| <= 6")
    T = jordan_matrix(y)
    n = partition_size(y)
    count = 0
    for cols in submodule_reps(y, q):
        if cols.shape[1] != partition_size(x):
            continue
        t_sub = fq.solve(cols, (T @ cols) % q, q) if cols.size else np.zeros((0, 0), dtype=np.int64)
        if nilpotent_type(t_sub % q, q) != x:
            continue
        quot = fq.complement_functionals(cols, n, q)
        if quot.size:
            basis = _preimage_basis(quot, q)
            t_q = fq.solve((quot @ basis) % q, (quot @ T @ basis) % q, q)
        else:
            t_q = np.zeros((0, 0), dtype=np.int64)
        if nilpotent_type(t_q % q, q) == z:
            count += 1
    return count


def cone_oracle_projective_model(q: int, N: int, delta: NilDelta):
    """Independent cone computation through strict 2-periodic complexes.

    The source z[-1] is replaced by a quasi-isomorphic complex w built
    from extension middles (components are modules over F_q[t]/(t^N);
    free components cannot carry stalk homology, whose dimension is not
    divisible by N), delta lifts to a strict chain map w -> x, and the
    homologies of the literal mapping cone are read off.
    """
    z0, z1 = delta.z
    x0, x1 = delta.x
    for lam in (z0, z1, x0, x1):
        if lam and lam[0] >= N:
            raise ResourceCapError("nilpotency degree must stay below N")
    e = delta.part("e", z0, x0)
    f = delta.part("f", z0, x1)
    g = delta.part("g", z1, x0)
    e2 = delta.part("e2", z1, x1)
    nz0, nz1 = partition_size(z0), partition_size(z1)
    nx0, nx1 = partition_size(x0), partition_size(x1)
    Tz0, Tz1 = jordan_matrix(z0), jordan_matrix(z1)
    Tx0, Tx1 = jordan_matrix(x0), jordan_matrix(x1)
    # extension middles E_e (of Z0 by X0) and E_e2 (of Z1 by X1)
    TEe = _extension_matrix(Tx0, Tz0, e, q)
    TEe2 = _extension_matrix(Tx1, Tz1, e2, q)
    # w: W0 = E_e2 + X0, W1 = X1 + E_e
    # d0 = [[0,0],[0,iota_{X0 -> E_e}]], d1 = [[iota_{X1 -> E_e2},0],[0,0]]
    w0 = nx1 + nz1 + nx0
    w1 = nx1 + nx0 + nz0
    d0 = np.zeros((w1, w0), dtype=np.int64)
    d0[nx1 : nx1 + nx0, nx1 + nz1 :] = np.eye(nx0, dtype=np.int64)
    d1 = np.zeros((w0, w1), dtype=np.int64)
    d1[:nx1, :nx1] = np.eye(nx1, dtype=np.int64)
    Tw0 = _block_diag(TEe2, Tx0)
    Tw1 = _block_diag(Tx1, TEe)
    # beta: w -> x; beta0 = [g pi_{e2}, id_{X0}], beta1 = [id_{X1}, f pi_e]
    pi_e2 = np.zeros((nz1, nx1 + nz1), dtype=np.int64)
    pi_e2[:, nx1:] = np.eye(nz1, dtype=np.int64)
    pi_e = np.zeros((nz0, nx0 + nz0), dtype=np.int64)
    pi_e[:, nx0:] = np.eye(nz0, dtype=np.int64)
    beta0 = np.zeros((nx0, w0), dtype=np.int64)
    beta0[:, : nx1 + nz1] = (g @ pi_e2) % q
    beta0[:, nx1 + nz1 :] = np.eye(nx0, dtype=np.int64)
    beta1 = np.zeros((nx1, w1), dtype=np.int64)
    beta1[:, :nx1] = np.eye(nx1, dtype=np.int64)
    beta1[:, nx1:] = (f @ pi_e) % q
    # mapping cone: C0 = X0 + W1, C1 = X1 + W0
    c0 = nx0 + w1
    c1 = nx1 + w0
    D0 = np.zeros((c1, c0), dtype=np.int64)
    D0[:nx1, nx0:] = beta1
    D0[nx1:, nx0:] = (-d1) % q
    D1 = np.zeros((c0, c1), dtype=np.int64)
    D1[:nx0, nx1:] = beta0
    D1[nx0:, nx1:] = (-d0) % q
    TC0 = _block_diag(Tx0, Tw1)
    TC1 = _block_diag(Tx1, Tw0)
    assert not np.any((D1 @ D0) % q) and not np.any((D0 @ D1) % q)
    assert not np.any((TC1 @ D0 - D0 @ TC0) % q)
    assert not np.any((TC0 @ D1 - D1 @ TC1) % q)
    h0 = _homology_type(D0, D1, TC0, q)
    h1 = _homology_type(D1, D0, TC1, q)
    return (h0, h1)


def _extension_matrix(TN, TM, phi, q) -> np.ndarray:
    """t-action on the extension of M by N with cocycle phi: M -> N."""
    nN, nM = TN.shape[0], TM.shape[0]
    T = np.zeros((nN + nM, nN + nM), dtype=np.int64)
    T[:nN, :nN] = TN
    T[nN:, nN:] = TM
    T[:nN, nN:] = phi % q
    return T


def _block_diag(A, B) -> np.ndarray:
    n, m = A.shape[0], B.shape[0]
    out = np.zeros((n + m, n + m), dtype=np.int64)
    out[:n, :n] = A
    out[n:, n:] = B
    return out


def _homology_type(d_out, d_in, T, q):
    """Partition of ker(d_out)/im(d_in) as a module under T."""
    ker = fq.kernel_basis(d_out % q, q)
    if ker.size == 0:
        return ()
    img = d_in % q
    # coordinates: basis of ker, quotient by im(d_in) inside ker
    sub = fq.solve(ker, img, q) if img.size else np.zeros((ker.shape[1], 0), dtype=np.int64)
    quot = fq.complement_functionals(sub, ker.shape[1], q)
    if quot.size == 0:
        return ()
    basis = _preimage_basis(quot, q)
    t_ker = fq.solve(ker, (T @ ker) % q, q)
    t_h = fq.solve((quot @ basis) % q, (quot @ t_ker @ basis) % q, q)
    return nilpotent_type(t_h % q, q)
