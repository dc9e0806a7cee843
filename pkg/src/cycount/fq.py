"""
Dense exact linear algebra over prime fields F_q.

Matrices are numpy int64 arrays with entries reduced into [0, q).  All
elimination is integer arithmetic mod q, so every rank / kernel / solve
is exact.  Only prime moduli are supported; prime powers would need a
polynomial representation and nothing downstream requires them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NonPrimeModulusError(ValueError):
    pass


class InconsistentSystemError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(q: int) -> int:
    if not is_prime(q):
        raise NonPrimeModulusError(f"modulus {q} is not prime")
    return q


_INV_TABLES: dict[int, np.ndarray] = {}


def inverse_table(q: int) -> np.ndarray:
    """Table t with t[a] = a^-1 mod q (t[0] = 0)."""
    tab = _INV_TABLES.get(q)
    if tab is None:
        check_prime(q)
        tab = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            tab[a] = pow(a, -1, q)
        _INV_TABLES[q] = tab
    return tab


@dataclass(frozen=True)
class FqScalar:
    """A residue mod a prime q.  Mostly a boundary type; internals use ints."""

    value: int
    q: int

    def __post_init__(self):
        check_prime(self.q)
        object.__setattr__(self, "value", self.value % self.q)

    def _coerce(self, other) -> "FqScalar":
        if isinstance(other, FqScalar):
            if other.q != self.q:
                raise ValueError("mixed moduli")
            return other
        return FqScalar(int(other), self.q)

    def __add__(self, other):
        o = self._coerce(other)
        return FqScalar(self.value + o.value, self.q)

    def __sub__(self, other):
        o = self._coerce(other)
        return FqScalar(self.value - o.value, self.q)

    def __mul__(self, other):
        o = self._coerce(other)
        return FqScalar(self.value * o.value, self.q)

    def inverse(self) -> "FqScalar":
        if self.value == 0:
            raise ZeroDivisionError("0 is not invertible")
        return FqScalar(pow(self.value, -1, self.q), self.q)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()


class FqMatrix:
    """Row-major matrix over F_q.  Thin wrapper over a numpy int64 array."""

    __slots__ = ("q", "array")

    def __init__(self, q: int, array):
        check_prime(q)
        a = np.asarray(array, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        self.q = q
        self.array = a % q

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    def __eq__(self, other):
        return (
            isinstance(other, FqMatrix)
            and self.q == other.q
            and self.array.shape == other.array.shape
            and bool(np.all(self.array == other.array))
        )

    def __repr__(self):
        return f"FqMatrix(q={self.q}, {self.array.tolist()})"


def _rref(a: np.ndarray, q: int):
    """Reduced row echelon form mod q.  Returns (R, pivot_cols)."""
    R = (np.asarray(a, dtype=np.int64) % q).copy()
    m, n = R.shape
    inv = inverse_table(q)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = (R[r] * inv[R[r, c]]) % q
        col = R[:, c].copy()
        col[r] = 0
        R = (R - np.outer(col, R[r])) % q
        pivots.append(c)
        r += 1
    return R, pivots


def rank(a: np.ndarray, q: int) -> int:
    if a.size == 0:
        return 0
    return len(_rref(a, q)[1])


def kernel_basis(a: np.ndarray, q: int) -> np.ndarray:
    """Columns form a basis of the right kernel of a (shape n x dim_ker)."""
    a = np.asarray(a, dtype=np.int64) % q
    m, n = a.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    R, pivots = _rref(a, q)
    free = [c for c in range(n) if c not in pivots]
    ker = np.zeros((n, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        ker[fc, k] = 1
        for r, pc in enumerate(pivots):
            ker[pc, k] = (-R[r, fc]) % q
    return ker


def solve(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """One solution x of a @ x = b mod q, or raise InconsistentSystemError."""
    a = np.asarray(a, dtype=np.int64) % q
    b = np.asarray(b, dtype=np.int64) % q
    m, n = a.shape
    if b.ndim == 1:
        b = b.reshape(m, 1)
        squeeze = True
    else:
        squeeze = False
    aug = np.hstack([a, b])
    R, pivots = _rref(aug, q)
    pivots_in_a = [p for p in pivots if p < n]
    if len(pivots_in_a) < len(pivots):
        raise InconsistentSystemError("no solution")
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for r, pc in enumerate(pivots_in_a):
        x[pc] = R[r, n:]
    return x[:, 0] if squeeze else x


@dataclass
class FFReduction:
    """Result of ff_reduce: rank data plus a reusable solver for rhs vectors."""

    q: int
    rank: int
    kernel: FqMatrix
    image: FqMatrix
    _a: np.ndarray

    def solve(self, rhs) -> np.ndarray:
        """A preimage of rhs under the reduced matrix (raises if none exists)."""
        return solve(self._a, np.asarray(rhs, dtype=np.int64), self.q)


def ff_reduce(m: FqMatrix) -> FFReduction:
    """Rank, kernel basis, image basis and solver handle for an FqMatrix."""
    a = m.array
    q = m.q
    R, pivots = _rref(a, q) if a.size else (a, [])
    ker = kernel_basis(a, q)
    img = a[:, pivots] if pivots else np.zeros((m.rows, 0), dtype=np.int64)
    return FFReduction(q, len(pivots), FqMatrix(q, ker), FqMatrix(q, img), a)


def in_span(vectors: np.ndarray, target: np.ndarray, q: int) -> bool:
    """Is target (column) in the column span of vectors?"""
    if target.ndim == 1:
        target = target.reshape(-1, 1)
    base = rank(vectors, q)
    return rank(np.hstack([vectors, target]), q) == base


def complement_functionals(cols: np.ndarray, n: int, q: int) -> np.ndarray:
    """Rows u with u @ cols = 0; they cut out the column span of cols in F_q^n."""
    if cols.size == 0:
        return np.eye(n, dtype=np.int64)
    return kernel_basis(cols.T % q, q).T % q


def batched_invertible_count(mats: np.ndarray, q: int) -> int:
    """Count invertible matrices in a stack (B, r, r), by batched elimination."""
    B, r, _ = mats.shape
    if r == 0:
        return B
    A = mats.copy() % q
    alive = np.ones(B, dtype=bool)
    inv = inverse_table(q)
    for c in range(r):
        idx = np.nonzero(alive)[0]
        if idx.size == 0:
            break
        sub = A[idx]
        colvals = sub[:, c:, c]
        has = (colvals != 0).any(axis=1)
        alive[idx[~has]] = False
        idx = idx[has]
        if idx.size == 0:
            continue
        sub = A[idx]
        prow = c + np.argmax(sub[:, c:, c] != 0, axis=1)
        bi = np.arange(idx.size)
        tmp = sub[bi, prow].copy()
        sub[bi, prow] = sub[:, c]
        sub[:, c] = tmp
        sub[:, c] = (sub[:, c] * inv[sub[:, c, c]][:, None]) % q
        factors = sub[:, :, c].copy()
        factors[:, c] = 0
        sub = (sub - factors[:, :, None] * sub[:, c, :][:, None, :]) % q
        A[idx] = sub
    return int(alive.sum())
