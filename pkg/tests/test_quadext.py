from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cycount.laurent import LaurentPoly
from cycount.quadext import QuadExt, ZeroDivisorError, eval_z


def test_sqrt_q_squares_to_q():
    for q in (2, 3, 5):
        r = QuadExt.sqrt_q_pow(q, 1)
        assert r * r == QuadExt.rational(q, q)


def test_q2_collapses_sqrt_qm1():
    # q - 1 = 1, so sqrt(q-1) canonicalizes to 1
    x = QuadExt(2, 0, 0, 1, 0)
    assert x == QuadExt.rational(2, 1)
    y = QuadExt(5, 0, 0, 1, 0)  # sqrt(4) = 2
    assert y == QuadExt.rational(5, 2)


def test_hand_expansion_q3():
    # (sqrt3 - 1/sqrt3)^2 = 3 - 2 + 1/3 = 4/3
    z = QuadExt(3, 0, Fraction(2, 3))  # sqrt3 - 1/sqrt3 = (2/3) sqrt3
    assert z * z == QuadExt.rational(3, Fraction(4, 3))


def test_zero_division_reported():
    with pytest.raises(ZeroDivisorError):
        QuadExt.rational(3, 0).inverse()


def test_inverse_round_trip():
    for q in (2, 3, 5):
        x = QuadExt(q, 2, 3, Fraction(1, 2), 1)
        assert x * x.inverse() == QuadExt.rational(q, 1)


def test_eval_z_unknot_and_hopf_values():
    zinv = LaurentPoly.z_pow(-1)
    for q in (2, 3, 5):
        # z^{-1} evaluates to sqrt(q)/(q-1)
        want = QuadExt.sqrt_q_pow(q, 1) / QuadExt.rational(q, q - 1)
        assert eval_z(zinv, q) == want
    # z^{-2} + 1 evaluates to (q^2 - q + 1)/(q - 1)^2
    p = LaurentPoly({-2: 1, 0: 1})
    for q in (2, 3, 5):
        want = QuadExt.rational(q, Fraction(q * q - q + 1, (q - 1) ** 2))
        assert eval_z(p, q) == want
    assert eval_z(LaurentPoly.one(), 7) == QuadExt.rational(7, 1)


small_fracs = st.fractions(
    min_value=-4, max_value=4, max_denominator=6
)


@st.composite
def quad_elements(draw, q):
    return QuadExt(
        q, draw(small_fracs), draw(small_fracs), draw(small_fracs), draw(small_fracs)
    )


@settings(max_examples=250, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(
    lambda q: st.tuples(quad_elements(q), quad_elements(q), quad_elements(q))
))
def test_commutative_ring_axioms(xyz):
    x, y, z = xyz
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    q = x.q
    r = QuadExt.sqrt_q_pow(q, 1)
    s = QuadExt.sqrt_qm1_pow(q, 1)
    assert r * r == QuadExt.rational(q, q)
    assert s * s == QuadExt.rational(q, q - 1)


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([2, 3, 5]),
    st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=4),
    st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=4),
)
def test_eval_z_is_ring_hom(q, c1, c2):
    p1, p2 = LaurentPoly(c1), LaurentPoly(c2)
    assert eval_z(p1 * p2, q) == eval_z(p1, q) * eval_z(p2, q)
    assert eval_z(p1 + p2, q) == eval_z(p1, q) + eval_z(p2, q)


def test_sqrt_of_count():
    a = QuadExt.sqrt_of_count(3, 12)  # 12 = 3 * 2^2 = q (q-1)^2
    assert a * a == QuadExt.rational(3, 12)
    with pytest.raises(ValueError):
        QuadExt.sqrt_of_count(3, 5)


def test_to_string_exact():
    assert QuadExt.rational(3, Fraction(7, 4)).to_string() == "7/4"
    s = (QuadExt.sqrt_q_pow(3, 1) / QuadExt.rational(3, 2)).to_string()
    assert "√3" in s and "/" in s
