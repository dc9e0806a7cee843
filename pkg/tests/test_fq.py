import numpy as np
import pytest

from cycount import fq
from cycount.fq import FqMatrix, NonPrimeModulusError, ff_reduce


def test_identity_full_rank_over_f2():
    red = ff_reduce(FqMatrix(2, np.eye(2, dtype=int)))
    assert red.rank == 2
    assert red.kernel.cols == 0


def test_zero_matrix_over_f3():
    red = ff_reduce(FqMatrix(3, np.zeros((2, 2), dtype=int)))
    assert red.rank == 0
    assert red.kernel.cols == 2


def test_rank_one_matrix_over_f5():
    # [[1,2],[2,4]]: second row is twice the first, rank 1 by hand
    red = ff_reduce(FqMatrix(5, [[1, 2], [2, 4]]))
    assert red.rank == 1


def test_nonprime_rejected():
    with pytest.raises(NonPrimeModulusError):
        FqMatrix(4, [[1]])
    with pytest.raises(NonPrimeModulusError):
        FqMatrix(9, [[1]])


def test_solver_round_trip():
    rng = np.random.default_rng(7)
    for q in (2, 3, 5):
        for _ in range(20):
            a = rng.integers(0, q, size=(4, 5))
            red = ff_reduce(FqMatrix(q, a))
            assert red.rank + red.kernel.cols == 5
            # image columns round-trip through the solver
            img = red.image.array
            for j in range(img.shape[1]):
                x = red.solve(img[:, j])
                assert np.array_equal((a @ x) % q, img[:, j] % q)
            # kernel columns are killed
            ker = red.kernel.array
            if ker.size:
                assert not np.any((a @ ker) % q)


def test_rank_plus_nullity_random():
    rng = np.random.default_rng(11)
    for q in (2, 3):
        for _ in range(30):
            m, n = rng.integers(1, 6, size=2)
            a = rng.integers(0, q, size=(m, n))
            assert fq.rank(a, q) + fq.kernel_basis(a, q).shape[1] == n


def test_batched_invertible_count_matches_loop():
    rng = np.random.default_rng(3)
    for q in (2, 3):
        mats = rng.integers(0, q, size=(50, 3, 3))
        expect = sum(1 for M in mats if fq.rank(M, q) == 3)
        assert fq.batched_invertible_count(mats.copy(), q) == expect


def test_scalar_arithmetic():
    a = fq.FqScalar(7, 5)
    assert a.value == 2
    assert (a * fq.FqScalar(3, 5)).value == 1
    assert (a / fq.FqScalar(2, 5)).value == 1
