import itertools

import numpy as np
import pytest

from cycount import fq
from cycount.complexes import ResourceCapError
from cycount.instances import (
    StableNakayama,
    aut_order_formula,
    build_root_nilpotent,
    build_stable_nakayama,
    classical_hall_numbers,
    cone_oracle_projective_model,
    jordan_matrix,
    module_hom_basis,
    nilpotent_type,
    normalize_partition,
)


def test_nilpotent_type_round_trip():
    for lam in [(), (1,), (3,), (2, 1), (2, 2, 1), (4, 3, 1)]:
        assert nilpotent_type(jordan_matrix(lam), 3) == lam


def test_hom_dims_match_min_formula():
    q = 3
    for a in [(1,), (2,), (2, 1), (3,)]:
        for b in [(1,), (3,), (1, 1)]:
            want = sum(min(p1, p2) for p1 in a for p2 in b)
            assert len(module_hom_basis(jordan_matrix(a), jordan_matrix(b), q)) == want


def test_aut_formula_vs_brute_force():
    for q in (2, 3):
        for lam in [(1,), (2,), (1, 1), (2, 1)]:
            T = jordan_matrix(lam)
            n = T.shape[0]
            homs = module_hom_basis(T, T, q)
            count = 0
            for coords in itertools.product(range(q), repeat=len(homs)):
                M = np.zeros((n, n), dtype=np.int64)
                for c, H in zip(coords, homs):
                    M = (M + c * H) % q
                if fq.rank(M, q) == n:
                    count += 1
            assert count == aut_order_formula(lam, q), (q, lam)


# ---------------------------------------------------------------------------
# stable Nakayama
# ---------------------------------------------------------------------------


def test_nakayama_m2_basics():
    M = build_stable_nakayama(2, 2)
    k = (1,)
    assert M.ext_dim(0, k, k) == 1
    assert M.ext_dim(1, k, k) == 1
    assert M.omega_label(k) == k
    cones = sorted(str(M.cone(d)) for d in M.ext1_elements(k, k))
    assert cones == ["()", "(1, 1)"]


def test_nakayama_cy_symmetry():
    for N in (3, 4):
        M = build_stable_nakayama(2, N)
        labels = [(a,) for a in range(1, N)] + [(1, 1), (2, 1)]
        for x in labels:
            for y in labels:
                for i in (-2, -1, 0, 1, 2):
                    assert M.ext_dim(i, x, y) == M.ext_dim(-1 - i, y, x)


def test_nakayama_ext_dim_is_min_formula():
    # stable homs of uniserials: min(i, j, N-i, N-j)
    for N in (3, 4, 5):
        M = build_stable_nakayama(2, N)
        for a in range(1, N):
            for b in range(1, N):
                want = min(a, b, N - a, N - b)
                assert M.ext_dim(0, (a,), (b,)) == want
                assert M.ext_dim(1, (a,), (b,)) == want


def test_nakayama_cone_of_zero_splits():
    M = build_stable_nakayama(3, 4)
    for z in [(1,), (2,), (3,)]:
        for x in [(1,), (3,)]:
            zero = next(d for d in M.ext1_elements(z, x) if not d.matrix().any())
            assert M.cone(zero) == M.direct_sum(x, z)


def test_nakayama_ext1_count():
    M = build_stable_nakayama(2, 4)
    for z in [(1,), (2,), (2, 1)]:
        for x in [(1,), (2,)]:
            n = sum(1 for _ in M.ext1_elements(z, x))
            assert n == 2 ** M.ext_dim(1, z, x)


def test_nakayama_omega_squared_is_identity_on_maps():
    M = build_stable_nakayama(3, 4)
    for z in [(1,), (2,), (3,), (2, 1)]:
        for x in [(1,), (2,), (3,)]:
            for H in M._stable_basis(z, x):
                again = M.omega_map(M.omega_label(z), M.omega_label(x), M.omega_map(z, x, H))
                assert np.array_equal(
                    M.stable_coords(z, x, again), M.stable_coords(z, x, H)
                ), (z, x)


def test_nakayama_periodic_defect_consistency():
    # the full page-rank identity needs Tate-level mixed products that the
    # syzygy model does not expose; the 2-periodic aggregate must still
    # hold: the Ext^0 and Ext^1 defects of every cone agree
    for q in (2, 3):
        M = build_stable_nakayama(q, 3)
        for z in [(1,), (2,)]:
            for x in [(1,), (2,)]:
                xz = M.direct_sum(x, z)
                for d in M.ext1_elements(z, x):
                    y = M.cone(d)
                    d0 = M.ext_dim(0, xz, xz) - M.ext_dim(0, y, y)
                    d1 = M.ext_dim(1, xz, xz) - M.ext_dim(1, y, y)
                    assert d0 == d1 and d0 >= 2 * M.r_rank(1, d) - M.ext_dim(1, z, x), (z, x)


def test_nakayama_resource_bounds():
    with pytest.raises(ResourceCapError):
        build_stable_nakayama(2, 9)


# ---------------------------------------------------------------------------
# root category of nilpotent representations
# ---------------------------------------------------------------------------


def test_nilpotent_stalk_ext_dims():
    M = build_root_nilpotent(3)
    k0 = M.stalk((1,), 0)
    assert M.ext_dim(0, k0, k0) == 1
    assert M.ext_dim(1, k0, k0) == 1
    # 1CY symmetry on a sample of pairs
    labels = [M.stalk(p, d) for p in [(1,), (2,), (2, 1)] for d in (0, 1)]
    labels.append(((1,), (1,)))
    for x in labels:
        for y in labels:
            for i in (-1, 0, 1, 2):
                assert M.ext_dim(i, x, y) == M.ext_dim(1 - i, y, x)


def test_nilpotent_ext1_count():
    M = build_root_nilpotent(2)
    for z in [M.stalk((1,), 0), M.stalk((2, 1), 1), ((1,), (1,))]:
        for x in [M.stalk((1,), 0), M.stalk((2,), 1)]:
            n = sum(1 for _ in M.ext1_elements(z, x))
            assert n == 2 ** M.ext_dim(1, z, x)


def test_nilpotent_cone_examples():
    M = build_root_nilpotent(3)
    k0 = M.stalk((1,), 0)
    cones = sorted(str(M.cone(d)) for d in M.ext1_elements(k0, k0))
    # q - 1 nonsplit extensions onto the 2-block stalk, one split
    assert cones.count("((2,), ())") == 2
    assert cones.count("((1, 1), ())") == 1
    # invertible Hom component kills both homologies
    z = M.stalk((1,), 0)
    x = M.stalk((1,), 1)
    labels = [M.cone(d) for d in M.ext1_elements(z, x)]
    assert ((), ()) in labels  # the nonzero f is invertible: zero object
    assert M.direct_sum(x, z) in labels


def test_nilpotent_cone_dimension_vector_additive():
    M = build_root_nilpotent(2)
    pairs = [(M.stalk((2,), 0), M.stalk((1, 1), 0)), (((1,), (1,)), M.stalk((2,), 1))]
    for z, x in pairs:
        vz = sum(z[0]) - sum(z[1])
        vx = sum(x[0]) - sum(x[1])
        for d in M.ext1_elements(z, x):
            y = M.cone(d)
            assert sum(y[0]) - sum(y[1]) == vz + vx


def test_nilpotent_dim_sum_identity():
    from cycount.hall import dim_sum_identity_check

    M = build_root_nilpotent(2)
    pairs = [
        (M.stalk((1,), 0), M.stalk((1,), 0)),
        (M.stalk((2,), 0), M.stalk((1,), 1)),
        (((1,), (1,)), M.stalk((1,), 0)),
    ]
    for z, x in pairs:
        rep = dim_sum_identity_check(M, z, x)
        assert rep.ok, rep.failures[:2]


def test_cone_oracle_exhaustive_sweep():
    M = build_root_nilpotent(2)
    parts = [(1,), (2,), (1, 1), (2, 1)]
    stalks = [M.stalk(p, d) for p in parts for d in (0, 1)]
    for z in stalks:
        for x in stalks:
            for delta in M.ext1_elements(z, x):
                assert M.cone(delta) == cone_oracle_projective_model(2, 5, delta)


def test_cone_oracle_mixed_classes_seeded():
    import random

    M = build_root_nilpotent(2)
    rng = random.Random(7)
    classes = [((1,), (1,)), ((2,), (1,)), ((1, 1), (1,)), ((1,), (2,))]
    for _ in range(40):
        z = rng.choice(classes)
        x = rng.choice(classes)
        deltas = list(M.ext1_elements(z, x))
        delta = rng.choice(deltas)
        assert M.cone(delta) == cone_oracle_projective_model(2, 6, delta)


def test_cone_oracle_nilpotency_guard():
    M = build_root_nilpotent(2)
    d = next(iter(M.ext1_elements(M.stalk((2,), 0), M.stalk((1,), 0))))
    with pytest.raises(ResourceCapError):
        cone_oracle_projective_model(2, 2, d)


def test_classical_hall_numbers():
    for q in (2, 3):
        # lines in k^2: sub k with quotient k
        assert classical_hall_numbers(q, (1,), (1,), (1, 1)) == q + 1
        # the unique t-invariant line of the uniserial of length 2
        assert classical_hall_numbers(q, (1,), (1,), (2,)) == 1
        assert classical_hall_numbers(q, (1,), (1,), (3,)) == 0
        assert classical_hall_numbers(q, (2,), (1,), (2, 1)) in (1, q, q + 1)


def test_riedtmann_consistency():
    # |Ext^1(z,x)_y| = g^y_{zx} |Aut x| |Aut z| |Hom(z,x)| / |Aut y|
    q = 2
    M = build_root_nilpotent(q)
    for lz in [(1,), (2,)]:
        for lx in [(1,), (1, 1)]:
            z, x = M.stalk(lz, 0), M.stalk(lx, 0)
            by_cone: dict = {}
            for d in M.ext1_elements(z, x):
                y = M.cone(d)
                by_cone[y[0]] = by_cone.get(y[0], 0) + 1
            hom = q ** M.heart_hom_dim(lz, lx)
            for y, count in by_cone.items():
                g = classical_hall_numbers(q, lz, lx, y)
                want = (
                    g
                    * aut_order_formula(lx, q)
                    * aut_order_formula(lz, q)
                    * hom
                    // aut_order_formula(y, q)
                )
                assert count == want, (lz, lx, y)
