import math
from fractions import Fraction

import pytest

from ellmzv.errors import EvenWeight
from ellmzv.linind import (binom_matrix, det_M, double_factorial, interior_block, matrix_C, verify_binom_identity,
                           verify_LU, verify_rank_C)

from test_exactcore import cofactor_det


def test_double_factorial_bigint():
    for m in range(1, 40, 2):
        assert double_factorial(m) == math.factorial(m) // (2 ** ((m - 1) // 2) * math.factorial((m - 1) // 2))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_det_against_cofactor(n):
    rows = [list(r) for r in binom_matrix(n, "M").matrix.entries]
    assert det_M(n) == cofactor_det(rows) == double_factorial(2 * n + 1)


def test_det_examples():
    assert [det_M(n) for n in (1, 2)] == [3, 15]
    assert det_M(10) == 13749310575


def test_lu():
    for n in range(1, 16):
        assert verify_LU(n)
    assert not verify_LU(4, u_override={(1, 1): 7})


def test_binom_identity():
    assert all(verify_binom_identity(a, b) for a in range(30) for b in range(a + 1))


def test_matrix_C_small():
    assert matrix_C(3).matrix.entries == ((-3, 0, 3), (3, 1, 2))
    assert matrix_C(5).row(0)[:4] == (-5, 0, 0, 5)
    with pytest.raises(EvenWeight):
        matrix_C(4)


def test_rank_C():
    for N in range(1, 40, 2):
        c = matrix_C(N)
        assert c.matrix.rank() == N // 3 + 1
        assert verify_rank_C(N)


def test_interior_block_invertible():
    for N in (7, 9, 11, 13):
        B = interior_block(N)
        assert B.det() != 0
        assert B.cols == N // 3
