import random
from fractions import Fraction

import pytest

from ellmzv.errors import EvenWeight
from ellmzv.exactcore import RatMatrix
from ellmzv.fayshuffle import (HomogLaurent, HomogPoly, fsh_basis, fsh_check, fsh_dim, fsh_pol_dim, hilbert_wn,
                               ptilde, w_basis, w_dim)

rng = random.Random(7)


def points(k):
    out = []
    while len(out) < k:
        x, y = Fraction(rng.randint(-40, 40), rng.randint(1, 9)), Fraction(rng.randint(-40, 40), rng.randint(1, 9))
        if x and y and x + y:
            out.append((x, y))
    return out


def monomial(N, i):
    return HomogLaurent(N, tuple(int(j == i) for j in range(N + 1)))


def fsh_rows(N, pts):
    """Evaluate both defining equations on each basis monomial at sample points."""
    rows = []
    for x, y in pts:
        rows.append([(lambda P: P(x, y) + P(x + y, -y) + P(-x - y, x))(monomial(N, i)) for i in range(N + 1)])
        rows.append([(lambda P: P(x, y) + P(y, x))(monomial(N, i)) for i in range(N + 1)])
    return rows


@pytest.mark.parametrize("N", range(0, 14))
def test_dim_against_point_evaluation(N):
    M = RatMatrix(fsh_rows(N, points(3 * N + 6)))
    assert fsh_dim(N) == M.cols - M.rank()


def test_dims_formula():
    for N in range(0, 40):
        assert fsh_dim(N) == (N // 3 + 1 if N % 2 else 0)


@pytest.mark.parametrize("N", [1, 3, 5, 9])
def test_basis_satisfies_equations_pointwise(N):
    for P in fsh_basis(N):
        for x, y in points(5):
            assert P(x, y) + P(x + y, -y) + P(-x - y, x) == 0
            assert P(x, y) + P(y, x) == 0


def test_pole_element():
    for N in (1, 3, 5, 7, 11):
        P = ptilde(N)
        assert fsh_check(P)
        for x, y in points(3):
            expect = x ** (N - 1) / y - y ** (N - 1) / x - (x ** (N - 1) - y ** (N - 1)) / (x + y)
            assert P(x, y) == expect
    with pytest.raises(EvenWeight):
        ptilde(4)


def test_basis_one():
    (b,) = fsh_basis(1)
    assert b.coeffs == (Fraction(-1), Fraction(1))
    assert not fsh_check(monomial(3, 1))


def test_polynomial_part():
    for N in range(1, 30, 2):
        assert fsh_pol_dim(N) == N // 3
        assert fsh_pol_dim(N) == w_dim(N - 2)


def test_w_space():
    h = hilbert_wn(30)
    for N in range(31):
        assert w_dim(N) == (N + 2) // 3 == h[N]
    for P in w_basis(7):
        for x, y in points(3):
            assert P(x, y) + P(y, x) == 0
            assert P(x, y) + P(y, -x - y) + P(-x - y, x) == 0


def test_homog_containers():
    p = HomogPoly(2, (1, 0, -1))
    assert p(2, 3) == 9 - 4
    with pytest.raises(ValueError):
        HomogLaurent(3, (1, 2))
