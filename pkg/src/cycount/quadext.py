"""
Exact arithmetic in Q(sqrt(q), sqrt(q-1)) for a prime q.

Elements are a + b*sqrt(q) + c*sqrt(q-1) + d*sqrt(q(q-1)) with rational
components.  This ring carries every weight that appears in object counts:
q^{k/2}, (q-1)^{k/2}, and their rational combinations.  When q-1 happens to
be a perfect square (q = 2, 5, ...), sqrt(q-1) collapses to an integer and
the c, d components are folded away, so equality is honest componentwise
equality of the canonical form.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .fq import check_prime


class ZeroDivisorError(ZeroDivisionError):
    """Division by an element that is not invertible in the ring."""


def _perfect_sqrt(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


class QuadExt:
    """Canonical-form element of Q(sqrt(q), sqrt(q-1))."""

    __slots__ = ("q", "a", "b", "c", "d")

    def __init__(self, q: int, a=0, b=0, c=0, d=0):
        check_prime(q)
        a = Fraction(a)
        b = Fraction(b)
        c = Fraction(c)
        d = Fraction(d)
        # q is prime, never a perfect square, but q-1 may be.
        s = _perfect_sqrt(q - 1)
        if s is not None:
            a, c = a + c * s, Fraction(0)
            b, d = b + d * s, Fraction(0)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *args):
        raise AttributeError("QuadExt is immutable")

    # --- constructors -------------------------------------------------

    @classmethod
    def rational(cls, q: int, value) -> "QuadExt":
        return cls(q, Fraction(value))

    @classmethod
    def sqrt_q_pow(cls, q: int, k: int) -> "QuadExt":
        """q^{k/2} for integer k (possibly negative)."""
        half, odd = divmod(k, 2)
        base = Fraction(q) ** half
        return cls(q, base) if not odd else cls(q, 0, base)

    @classmethod
    def sqrt_qm1_pow(cls, q: int, k: int) -> "QuadExt":
        """(q-1)^{k/2} for integer k (possibly negative)."""
        half, odd = divmod(k, 2)
        base = Fraction(q - 1) ** half
        return cls(q, base) if not odd else cls(q, 0, 0, base)

    @classmethod
    def sqrt_of_count(cls, q: int, n: int) -> "QuadExt":
        """sqrt(n) for n of the form q^a (q-1)^b; raises otherwise.

        Automorphism group orders of flagged complexes always have this
        form, which is what keeps half-density weights inside the ring.
        """
        if n <= 0:
            raise ValueError("need a positive count")
        a = 0
        while n % q == 0:
            n //= q
            a += 1
        b = 0
        if q > 2:
            while n % (q - 1) == 0:
                n //= q - 1
                b += 1
        if n != 1:
            raise ValueError(f"count is not of the form q^a(q-1)^b (left {n})")
        return cls.sqrt_q_pow(q, a) * cls.sqrt_qm1_pow(q, b)

    # --- ring structure -----------------------------------------------

    def _check(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.q != self.q:
                raise ValueError("mixed base primes")
            return other
        return QuadExt(self.q, Fraction(other))

    def __add__(self, other):
        o = self._check(other)
        return QuadExt(self.q, self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(self.q, -self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        o = self._check(other)
        q = self.q
        qm = q - 1
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return QuadExt(
            q,
            a1 * a2 + q * b1 * b2 + qm * c1 * c2 + q * qm * d1 * d2,
            a1 * b2 + b1 * a2 + qm * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + q * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def _basis(self):
        """Canonical-form ring basis: collapse makes it 2- or 4-dimensional."""
        q = self.q
        if _perfect_sqrt(q - 1) is not None:
            return [QuadExt(q, 1), QuadExt(q, 0, 1)]
        return [
            QuadExt(q, 1),
            QuadExt(q, 0, 1),
            QuadExt(q, 0, 0, 1),
            QuadExt(q, 0, 0, 0, 1),
        ]

    def inverse(self) -> "QuadExt":
        """Inverse via the multiplication matrix over Q on the canonical basis."""
        basis = self._basis()
        n = len(basis)
        comps = lambda x: (x.a, x.b, x.c, x.d)[:n]
        cols = [comps(self * e) for e in basis]
        A = [[Fraction(cols[j][i]) for j in range(n)] for i in range(n)]
        b = [Fraction(1)] + [Fraction(0)] * (n - 1)
        for col in range(n):
            piv = next((r for r in range(col, n) if A[r][col] != 0), None)
            if piv is None:
                raise ZeroDivisorError(f"{self!r} is a zero divisor or zero")
            A[col], A[piv] = A[piv], A[col]
            b[col], b[piv] = b[piv], b[col]
            inv = 1 / A[col][col]
            A[col] = [v * inv for v in A[col]]
            b[col] *= inv
            for r in range(n):
                if r != col and A[r][col]:
                    f = A[r][col]
                    A[r] = [v - f * w for v, w in zip(A[r], A[col])]
                    b[r] -= f * b[col]
        coeffs = list(b) + [0] * (4 - n)
        return sum(
            (c * e for c, e in zip(coeffs, self._basis())), QuadExt(self.q, 0)
        )

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __rtruediv__(self, other):
        return self._check(other) / self

    def __pow__(self, n: int):
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = QuadExt(self.q, 1)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # --- predicates / output --------------------------------------------

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadExt(self.q, other)
        return (
            isinstance(other, QuadExt)
            and self.q == other.q
            and (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)
        )

    def __hash__(self):
        return hash((self.q, self.a, self.b, self.c, self.d))

    def __repr__(self):
        return f"QuadExt(q={self.q}, {self.to_string()})"

    def to_string(self) -> str:
        """Exact human-readable form, e.g. '7/4' or '(1/2)√2+3'."""
        if self.is_zero():
            return "0"
        q = self.q
        names = ["", f"√{q}", f"√{q - 1}", f"√{q * (q - 1)}"]
        parts = []
        for comp, name in zip((self.a, self.b, self.c, self.d), names):
            if comp == 0:
                continue
            frac = str(comp) if comp.denominator != 1 else str(comp.numerator)
            if name:
                if comp == 1:
                    frac = ""
                elif comp == -1:
                    frac = "-"
                elif "/" in frac:
                    frac = f"({frac})"
            parts.append(f"{frac}{name}")
        out = "+".join(parts)
        return out.replace("+-", "-")


def eval_z(poly, q: int) -> QuadExt:
    """Evaluate a LaurentPoly at z = sqrt(q) - 1/sqrt(q), exactly."""
    z = QuadExt(q, 0, Fraction(q - 1, q))  # (q-1)/q * sqrt(q)
    zinv = None
    out = QuadExt(q, 0)
    for e, c in poly.coeffs.items():
        if e >= 0:
            term = z**e
        else:
            if zinv is None:
                zinv = z.inverse()
            term = zinv ** (-e)
        out = out + term * c
    return out
