import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from ellmzv.eisenstein import (EisCombination, bernoulli, bernoulli_table, divisor_sigma, eisenstein_q,
                               indefinite_eisenstein, zeta_even)
from ellmzv.errors import OddIndex, WeightMismatch
from ellmzv.exactcore import QSeries, TPoly

T = 2j * math.pi


def bernoulli_by_inversion(n):
    # t/(e^t - 1) = 1 / sum_k t^k/(k+1)!
    a = [Fraction(1, math.factorial(k + 1)) for k in range(n + 1)]
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(a[k] * b[m - k] for k in range(1, m + 1)))
    return [b[k] * math.factorial(k) for k in range(n + 1)]


def test_bernoulli_matches_series_inversion():
    assert bernoulli_table(40) == bernoulli_by_inversion(40)
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(12) == Fraction(-691, 2730)


def test_zeta_even_numeric():
    assert complex(zeta_even(2).evaluate(T)) == pytest.approx(math.pi ** 2 / 6)
    for k in (4, 6, 10):
        direct = sum(1 / n ** k for n in range(1, 20000))
        assert complex(zeta_even(k).evaluate(T)).real == pytest.approx(direct, rel=1e-12)
    assert zeta_even(0) == TPoly.monomial(Fraction(-1, 2), 0)
    with pytest.raises(OddIndex):
        zeta_even(3)


def test_divisor_sigma_brute_force():
    for m in (0, 1, 3, 5):
        for n in range(1, 60):
            assert divisor_sigma(m, n) == sum(d ** m for d in range(1, n + 1) if n % d == 0)


def lattice_sum(k, tau, R=80):
    m = np.arange(-R, R + 1)
    w = m[:, None] + m[None, :] * tau
    w[R, R] = 1
    vals = w ** (-float(k))
    vals[R, R] = 0
    return vals.sum()


@pytest.mark.parametrize("tau", [1j, 0.5 + 1j])
@pytest.mark.parametrize("k", [6, 8])
def test_eisenstein_against_lattice_sum(k, tau):
    g = eisenstein_q(k, 30).series
    q = cmath.exp(T * tau)
    assert g.evaluate(q, T) == pytest.approx(lattice_sum(k, tau), abs=1e-6)


def test_small_cases():
    assert eisenstein_q(0, 3).series == QSeries.constant(-1, 3)
    assert eisenstein_q(5, 3).series.is_zero()
    g4 = eisenstein_q(4, 3).series
    # 2 zeta(4) = T^4/720 ... q coefficient 2 T^4/3! * sigma_3(1)
    assert g4[1] == TPoly.monomial(Fraction(1, 3), 4)
    assert g4[0] == zeta_even(4) * 2


def test_indefinite_derivative():
    for j in (2, 4, 6):
        ie = indefinite_eisenstein(j, 8)
        g = eisenstein_q(j, 8).series
        four_zeta = QSeries.constant(zeta_even(j) * 4, 8)
        assert ie.dtau() == four_zeta - g
        assert ie.qpart[0].is_zero()
        assert ie.weight == j
    with pytest.raises(OddIndex):
        indefinite_eisenstein(3, 4)


def test_combination_weights():
    a = EisCombination.basis(2, 4)
    b = EisCombination.basis(0, 6)
    c = a + b.scale(3)
    assert c.weight == 6
    tau_part, qpart = c.realize(5)
    ia, ib = indefinite_eisenstein(4, 5), indefinite_eisenstein(6, 5)
    assert tau_part == ia.tau_coeff * TPoly.monomial(1, 2) + ib.tau_coeff * 3
    assert qpart == ia.qpart.scale(TPoly.monomial(1, 2)) + ib.qpart.scale(3)
    with pytest.raises(WeightMismatch):
        a + EisCombination.basis(0, 4)
