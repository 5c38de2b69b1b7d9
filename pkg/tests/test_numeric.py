import cmath
import math

import numpy as np
import pytest

from ellmzv import numeric
from ellmzv.emzv import emzv_qexpansion
from ellmzv.errors import BoundaryOne, NotUpperHalfPlane, PoleAtLatticePoint, ToleranceNotMet, UnknownConstant

T = 2j * math.pi


def theta_product(xi, tau, terms=80):
    """Jacobi triple product for the odd theta function."""
    q = cmath.exp(T * tau)
    z = cmath.exp(T * xi)
    p = cmath.exp(T * tau / 8) * (cmath.exp(1j * math.pi * xi) - cmath.exp(-1j * math.pi * xi))
    for n in range(1, terms):
        p *= (1 - q ** n) * (1 - q ** n * z) * (1 - q ** n / z)
    return p


def f_by_contour(xi, tau, kmax, radius=0.2, nodes=256):
    """f^(k) as Cauchy coefficients of exp(2 pi i r alpha) F(xi, alpha)."""
    tp = numeric.TauPoint(tau)
    r = xi.imag / tp.tau.imag
    a = radius * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    g = np.exp(T * r * a) * numeric.kronecker_F(xi, a, tp)
    return [np.mean(g * a ** (1 - k)) for k in range(kmax + 1)]


@pytest.mark.parametrize("tau", [1j, 0.5 + 1j, (1 + 3j) / 2])
def test_theta_triple_product(tau):
    for xi in (0.3 + 0.2j, -0.7 + 0.9j, 0.05):
        assert numeric.theta(xi, tau) == pytest.approx(theta_product(xi, tau), abs=1e-12)


def test_theta_odd_and_derivative():
    tau = 0.5 + 1j
    xi = 0.21 + 0.13j
    assert numeric.theta(-xi, tau) == pytest.approx(-numeric.theta(xi, tau), abs=1e-14)
    h = 1e-5
    fd = (numeric.theta(xi + h, tau) - numeric.theta(xi - h, tau)) / (2 * h)
    assert numeric.theta_derivs(xi, tau, 1)[1] == pytest.approx(fd, rel=1e-8)


@pytest.mark.parametrize("tau", [1j, (1 + 3j) / 2])
def test_f_against_contour(tau):
    for xi in (0.3 + 0.4j, 0.8 + 0.1j, 0.45 + 1.1j):
        direct = numeric.f_values(np.array([xi]), tau, 6)[:, 0]
        for k, v in enumerate(f_by_contour(xi, tau, 6)):
            assert direct[k] == pytest.approx(v, abs=1e-10)


def test_f_on_real_line():
    tau = 1j
    f = numeric.omega_coeffs(0.3, tau, 3)
    assert f.f(0) == pytest.approx(1)
    # near 0, f^(1) ~ 1/xi
    assert numeric.omega_coeffs(1e-4, tau, 1).f(1) == pytest.approx(1e4, rel=1e-6)


def test_errors():
    with pytest.raises(NotUpperHalfPlane):
        numeric.TauPoint(1.0)
    with pytest.raises(PoleAtLatticePoint):
        numeric.kronecker_F(1j, 0.2, 1j)
    with pytest.raises(PoleAtLatticePoint):
        numeric.f_values(np.array([0.0]), 1j, 2)
    with pytest.raises(BoundaryOne):
        numeric.iterated_integral_alpha((1, 2), 1j)
    with pytest.raises(BoundaryOne):
        numeric.iterated_integral_alpha((0, 1), 1j)
    with pytest.raises(UnknownConstant):
        numeric.eval_emzv_series(emzv_qexpansion((0, 0, 3), 40), 1j)


def test_tolerance_not_met():
    letters = [lambda s: 1 / np.sqrt(np.abs(s - 0.5))]
    with pytest.raises(ToleranceNotMet):
        numeric.iterated_integral(letters, 0.0, 1.0, tol=1e-14, max_depth=3)


def test_order_guard():
    with pytest.raises(ValueError):
        numeric.eval_emzv_series(emzv_qexpansion((0, 3), 2), 0.5 + 0.3j)


@pytest.mark.parametrize("tau", [1j, 0.5 + 1j])
def test_length_one(tau):
    for n, b in ((0, 1), (2, 1 / 6), (4, -1 / 30), (6, 1 / 42)):
        v = numeric.iterated_integral_alpha((n,), tau)
        assert abs(v - T ** n * b / math.factorial(n)) < 1e-10


def test_length_two_even_constant():
    # I(2,2) is constant and equals B_2^2 T^4 / 8
    v = numeric.iterated_integral_alpha((2, 2), 1j)
    assert v == pytest.approx((T ** 4 / 8 / 36), abs=1e-10)


def test_precision_ladder():
    for tol in (1e-6, 1e-9):
        v1, e1 = numeric.iterated_integral_alpha((2, 3), 1j, tol=tol, with_error=True)
        v2 = numeric.iterated_integral_alpha((2, 3), 1j, tol=tol / 2)
        assert abs(v1 - v2) <= max(e1, 1e-14)


def test_interior_one_best_effort():
    # reflection forces I(0,1,0) = -I(0,1,0)
    v, err = numeric.iterated_integral_alpha((0, 1, 0), 1j, with_error=True)
    assert abs(v) < 1e-6


@pytest.mark.parametrize("tau", [1j, 0.5 + 1j])
def test_cross_validation(tau):
    for ix in ((0, 3), (2, 3), (0, 5), (4, 3), (3, 3)):
        r = numeric.cross_validate(ix, tau, order=40, tol=1e-8)
        assert r["ok"], r


def test_properties_report():
    rep = numeric.check_properties(1j, samples=10, kmax=6, seed=3)
    assert rep["ok"]
    assert set(rep["residuals"]) == {"periodicity_1", "periodicity_tau", "parity", "fay", "s_transform"}


def test_s_transform_factor():
    # the analytic factor is tau^k; tau^(k+1) would fail already at k = 0
    tp = numeric.TauPoint(0.3 + 1.1j)
    xi = np.array([0.31 + 0.52j])
    a = numeric.f_values(xi / tp.tau, tp.s_transform(), 4)[:, 0]
    b = numeric.f_values(xi, tp, 4)[:, 0]
    for k in range(5):
        assert a[k] == pytest.approx(tp.tau ** k * b[k], rel=1e-10)
