import pytest

from cycount import corpus
from cycount.complexes import GradedPointSet, Ruling
from cycount.laurent import LaurentPoly
from cycount.tangles import (
    BoundaryMismatchError,
    GradingError,
    TangleSyntaxError,
    enumerate_set_rulings,
    enumerate_tangle_rulings,
    identity_word,
    letter_ruling_matrix,
    parse_tangle,
    ruling_polynomial,
    ruling_transfer,
    word_from_ops,
)

UNKNOT_SRC = """\
# graded unknot
mod 0
left:
L 1 -1
R 1
"""


def test_parse_unknot():
    w = parse_tangle(UNKNOT_SRC)
    assert w.is_closed
    assert [t.kind for t in w.letters] == ["L", "R"]
    assert w.letters[0].right_boundary.degrees == (0, -1)


def test_parse_identity():
    w = parse_tangle("mod 0\nleft: 0 -1\n")
    assert not w.letters
    assert w.left_boundary.degrees == (0, -1)


def test_parse_hopf_dsl_slices():
    src = "mod 2\nleft:\nL 1 -1\nL 2 0\nX 2\nX 2\nR 3\nR 1\n"
    w = parse_tangle(src)
    assert w.is_closed
    # middle slice matches the standard Hopf picture with k = 1 (mod 2)
    mid = w.letters[1].right_boundary
    assert mid == GradedPointSet(1, (0, 1, 0, 1))


def test_parse_errors_carry_position():
    with pytest.raises(TangleSyntaxError) as e:
        parse_tangle("mod 0\nleft:\nL 1\n")
    assert e.value.line == 3
    with pytest.raises(GradingError):
        parse_tangle("mod 0\nleft: 0 0\nR 1\n")
    with pytest.raises(TangleSyntaxError):
        parse_tangle("mod 3\nleft:\n")


def test_set_rulings():
    assert enumerate_set_rulings(GradedPointSet(0, ())) == [Ruling(())]
    assert enumerate_set_rulings(GradedPointSet(0, (0, -1))) == [Ruling(((1, 2),))]
    # (1,0,0,-1) bottom-to-top: brute-force matching oracle gives exactly 2
    pts = GradedPointSet(0, (1, 0, 0, -1))
    got = enumerate_set_rulings(pts)
    assert got == [Ruling(((1, 2), (3, 4))), Ruling(((1, 3), (2, 4)))]
    # brute force over all 3 perfect matchings of 4 points
    import itertools

    def all_matchings(n):
        if n == 0:
            yield ()
            return
        items = list(range(1, n + 1))
        first = items[0]
        for t in items[1:]:
            rest = [u for u in items[1:] if u != t]
            for sub in _matchings_of(rest):
                yield ((first, t),) + sub

    def _matchings_of(items):
        if not items:
            yield ()
            return
        first = items[0]
        for t in items[1:]:
            rest = [u for u in items[1:] if u != t]
            for sub in _matchings_of(rest):
                yield ((first, t),) + sub

    valid = [
        mm
        for mm in all_matchings(4)
        if all(pts.deg(s) == pts.deg(t) + 1 for s, t in mm)
    ]
    assert len(valid) == len(got)


def test_unknot_polynomial():
    w = corpus.unknot_word()
    assert ruling_polynomial(w) == LaurentPoly.z_pow(-1)
    rt = ruling_transfer(w)
    assert rt.single_entry() == LaurentPoly.z_pow(-1)


def test_hopf_polynomials():
    # k = 0: rulings with 0 and 2 switches
    w0 = corpus.hopf_word(0, 0)
    assert ruling_polynomial(w0) == LaurentPoly({-2: 1, 0: 1})
    # k != 0 mod 2m: a single ruling without switches
    for k, m in [(1, 0), (1, 2), (2, 3), (3, 2)]:
        w = corpus.hopf_word(k, m)
        assert ruling_polynomial(w) == LaurentPoly.z_pow(-2)
    # k = 2m reduces to 0
    assert ruling_polynomial(corpus.hopf_word(2, 1)) == LaurentPoly({-2: 1, 0: 1})


def test_identity_matrix():
    for m in (0, 1):
        w = identity_word(m, (1, 0, 0, -1))
        rt = ruling_transfer(w)
        assert rt.rows == rt.cols
        for i, r in enumerate(rt.rows):
            for j, c in enumerate(rt.cols):
                want = LaurentPoly.one() if i == j else LaurentPoly.zero()
                assert rt.entries[i][j] == want


def test_switch_needs_equal_degrees():
    # crossing with gap 1: no z entries anywhere
    w = word_from_ops(0, (1, 0, 0, -1), [("X", 1)])
    rt = ruling_transfer(w)
    for row in rt.entries:
        for e in row:
            assert all(exp == 0 for exp in e.coeffs)


def test_transfer_matches_enumeration_on_random_words():
    words = corpus.random_words(count=200, max_len=12, seed=20240)
    for w in words:
        rt = ruling_transfer(w)
        # aggregate the sweep by boundary pair
        agg = {}
        rc = w.right_cusp_count()
        for tr in enumerate_tangle_rulings(w):
            key = (tr.left, tr.right)
            agg[key] = agg.get(key, LaurentPoly.zero()) + LaurentPoly.z_pow(
                tr.switch_count - rc
            )
        for i, r in enumerate(rt.rows):
            for j, c in enumerate(rt.cols):
                want = agg.get((r, c), LaurentPoly.zero())
                assert rt.entries[i][j] == want, (w, r, c)


def test_functoriality_on_split_words():
    words = [w for w in corpus.random_words(count=40, max_len=8, seed=7)]
    for w in words:
        if len(w.letters) < 2:
            continue
        cut = len(w.letters) // 2
        w1 = word_from_ops(
            w.m,
            w.left_boundary.degrees,
            [
                (t.kind, t.pos) if t.upper_degree is None else (t.kind, t.pos, t.upper_degree)
                for t in w.letters[:cut]
            ],
        )
        w2 = word_from_ops(
            w.m,
            w1.right_boundary.degrees,
            [
                (t.kind, t.pos) if t.upper_degree is None else (t.kind, t.pos, t.upper_degree)
                for t in w.letters[cut:]
            ],
        )
        assert ruling_transfer(w1) @ ruling_transfer(w2) == ruling_transfer(w)


def test_closed_coefficients_nonnegative():
    for w in corpus.random_words(count=120, max_len=10, seed=99):
        if w.is_closed:
            p = ruling_polynomial(w)
            assert all(c > 0 for c in p.coeffs.values())


def test_compose_boundary_mismatch():
    w1 = corpus.unknot_word()
    w2 = identity_word(0, (0, -1))
    with pytest.raises(BoundaryMismatchError):
        w1.compose(w2)
