"""Double-precision evaluation of theta, the Kronecker series, the functions
f^(k) and iterated integrals of the forms f^(k)(xi) dxi along alpha = [0, 1].

Iterated integrals are computed by carrying the vector of prefix integrals
S_k(s) = int_{0<t_1<..<t_k<s} f_1(t_1)...f_k(t_k) across panels of [0, 1]; on a
panel S_k = S_k(a) + int_a^s S_{k-1} f_k, done by Chebyshev spectral
integration at first-kind nodes (which avoid the panel endpoints, where
f^(k) is only available through a 0/0 cancellation).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import chebyshev as C

from .emzv import EMZVSeries, MultiIndex, emzv_qexpansion
from .errors import BoundaryOne, NotUpperHalfPlane, PoleAtLatticePoint, ToleranceNotMet, UnknownConstant

__all__ = [
    "TauPoint", "AlphaSeries", "theta", "theta_derivs", "kronecker_F", "omega_coeffs", "f_values",
    "iterated_integral", "iterated_integral_alpha", "eval_emzv_series", "cross_validate", "check_properties",
]

TWO_PI_I = 2j * math.pi
DEFAULT_TERMS = 40
TAIL_BOUND = 1e-18


@dataclass(frozen=True)
class TauPoint:
    tau: complex

    def __post_init__(self):
        tau = complex(self.tau)
        if not tau.imag > 0:
            raise NotUpperHalfPlane(f"Im(tau) must be positive, got {tau}")
        object.__setattr__(self, "tau", tau)

    @property
    def q(self) -> complex:
        return cmath.exp(TWO_PI_I * self.tau)

    def s_transform(self) -> "TauPoint":
        return TauPoint(-1 / self.tau)


def _tau(tau) -> TauPoint:
    return tau if isinstance(tau, TauPoint) else TauPoint(tau)


def lattice_coords(xi, tau: TauPoint):
    """(s, r) with xi = s + r*tau."""
    xi = np.asarray(xi, dtype=complex)
    r = xi.imag / tau.tau.imag
    s = xi.real - r * tau.tau.real
    return s, r


def lattice_distance(xi, tau: TauPoint):
    s, r = lattice_coords(xi, tau)
    return np.hypot(s - np.round(s), r - np.round(r))


def _theta_scaled(xi, tau: TauPoint, jmax: int, terms: int):
    """theta^(j)(xi) / e^L for j = 0..jmax, and L (per point).

    L is the log-magnitude of the largest series term, so the result is
    finite even where theta itself overflows.
    """
    xi = np.asarray(xi, dtype=complex)
    n = np.arange(-terms, terms + 1) + 0.5
    sign = np.where(np.arange(-terms, terms + 1) % 2, -1.0, 1.0)
    expo = 1j * math.pi * tau.tau * n ** 2 + TWO_PI_I * np.multiply.outer(xi, n)
    lead = np.max(expo.real, axis=-1)
    # first omitted terms on either side, relative to the largest one
    for edge in (n[0] - 1, n[-1] + 1):
        tail = -math.pi * tau.tau.imag * edge ** 2 - 2 * math.pi * edge * xi.imag - lead
        if np.any(tail > math.log(TAIL_BOUND)):
            raise ValueError(f"{terms} theta terms leave a relative tail above {TAIL_BOUND:g}")
    ex = sign * np.exp(expo - lead[..., None])
    out = np.empty((jmax + 1,) + xi.shape, dtype=complex)
    fac = np.ones_like(n, dtype=complex)
    for j in range(jmax + 1):
        out[j] = ex @ fac
        fac = fac * (TWO_PI_I * n)
    return out, lead


def theta_derivs(xi, tau, jmax: int, terms: int = DEFAULT_TERMS) -> np.ndarray:
    """theta^(j)(xi) for j = 0..jmax, shape (jmax+1,) + shape(xi)."""
    out, lead = _theta_scaled(xi, _tau(tau), jmax, terms)
    return out * np.exp(lead)


def theta(xi, tau, terms: int = DEFAULT_TERMS):
    """Odd Jacobi theta function sum_n (-1)^n q^{(n+1/2)^2/2} e^{(n+1/2) 2 pi i xi}."""
    out = theta_derivs(xi, tau, 0, terms)[0]
    return out[()] if out.ndim == 0 else out


def _check_regular(x, tau: TauPoint, what: str):
    if np.any(lattice_distance(x, tau) < 1e-12):
        raise PoleAtLatticePoint(f"{what} lies on the lattice Z + Z*tau")


def kronecker_F(xi, alpha, tau, terms: int = DEFAULT_TERMS):
    tau = _tau(tau)
    _check_regular(xi, tau, "xi")
    _check_regular(alpha, tau, "alpha")
    d1 = theta_derivs(0.0, tau, 1, terms)[1]
    return d1 * theta(np.add(xi, alpha), tau, terms) / (theta(xi, tau, terms) * theta(alpha, tau, terms))


def _theta0_ratios(tau: TauPoint, kmax: int, terms: int) -> np.ndarray:
    """theta(alpha) / (alpha * theta'(0)) = sum_m d_m alpha^m, m = 0..kmax."""
    th0 = theta_derivs(0.0, tau, kmax + 1, terms)
    d = np.zeros(kmax + 1, dtype=complex)
    for m in range(0, kmax + 1, 2):
        d[m] = th0[m + 1] / (th0[1] * math.factorial(m + 1))
    return d


def f_values(xi, tau, kmax: int, terms: int = DEFAULT_TERMS) -> np.ndarray:
    """f^(k)(xi) for k = 0..kmax, shape (kmax+1,) + shape(xi).

    f^(k) is the coefficient of alpha^(k-1) in exp(2 pi i r alpha) F(xi, alpha)
    with r = Im(xi)/Im(tau).
    """
    tau = _tau(tau)
    xi = np.asarray(xi, dtype=complex)
    _check_regular(xi, tau, "xi")
    th, _ = _theta_scaled(xi, tau, kmax, terms)
    _, r = lattice_coords(xi, tau)
    ratio = th / th[0]
    expo = np.empty_like(th)
    for j in range(kmax + 1):
        ratio[j] = ratio[j] / math.factorial(j)
        expo[j] = (TWO_PI_I * r) ** j / math.factorial(j)
    num = np.zeros_like(th)
    for k in range(kmax + 1):
        num[k] = sum(expo[i] * ratio[k - i] for i in range(k + 1))
    d = _theta0_ratios(tau, kmax, terms)
    out = np.zeros_like(th)
    for k in range(kmax + 1):
        acc = num[k] - sum(d[m] * out[k - m] for m in range(1, k + 1))
        out[k] = acc / d[0]
    return out


@dataclass(frozen=True)
class AlphaSeries:
    """Coefficients of alpha^-1, alpha^0, ..., alpha^(kmax-1), i.e. f^(0..kmax)."""

    xi: complex
    kmax: int
    coeffs: tuple[complex, ...]

    def f(self, k: int) -> complex:
        return self.coeffs[k]


def omega_coeffs(xi: complex, tau, kmax: int, terms: int = DEFAULT_TERMS) -> AlphaSeries:
    vals = f_values(np.array([xi]), tau, kmax, terms)[:, 0]
    return AlphaSeries(complex(xi), kmax, tuple(complex(v) for v in vals))


# ---------------------------------------------------------------------------
# iterated integrals

_P = 24
_NODES = C.chebpts1(_P)
_VINV = np.linalg.inv(C.chebvander(_NODES, _P - 1))


def _cumint_matrices():
    # columns: interpolate unit data at nodes, integrate from -1
    A = np.empty((_P, _P))
    w = np.empty(_P)
    for j in range(_P):
        coef = _VINV[:, j]
        ic = C.chebint(coef, lbnd=-1)
        A[:, j] = C.chebval(_NODES, ic)
        w[j] = C.chebval(1.0, ic)
    return A, w


_CUMINT, _ENDW = _cumint_matrices()


Letter = Callable[[np.ndarray], np.ndarray]


def _panel(state: np.ndarray, letters: Sequence[Letter], a: float, b: float) -> np.ndarray:
    h = 0.5 * (b - a)
    s = a + h * (_NODES + 1)
    prev = np.full(_P, state[0], dtype=complex)
    out = state.copy()
    for k, f in enumerate(letters, start=1):
        g = prev * f(s)
        out[k] = state[k] + h * (_ENDW @ g)
        prev = state[k] + h * (_CUMINT @ g)
    return out


def iterated_integral(letters: Sequence[Letter], a: float = 0.0, b: float = 1.0, tol: float = 1e-10,
                      certify: bool = True, max_depth: int = 40,
                      max_panels: int = 1000) -> tuple[np.ndarray, float]:
    """Prefix integrals S_0..S_r over [a, b] and an error estimate.

    ``letters`` are vectorized functions of the real path parameter.  Panels
    are bisected until the coarse and two-panel results agree to a share of
    ``tol`` proportional to their width (never below rounding level).  With
    ``certify`` false a failure to converge returns the best value found
    instead of raising.
    """
    state0 = np.zeros(len(letters) + 1, dtype=complex)
    state0[0] = 1.0
    width = abs(b - a)
    budget = [max_panels]

    def adapt(state, lo, hi, depth):
        budget[0] -= 1
        coarse = _panel(state, letters, lo, hi)
        mid = 0.5 * (lo + hi)
        fine = _panel(_panel(state, letters, lo, mid), letters, mid, hi)
        err = float(np.max(np.abs(coarse - fine)))
        floor = 1e-14 * float(np.max(np.abs(fine)))
        if err <= max(tol * abs(hi - lo) / width, floor):
            return fine, err
        if depth >= max_depth or budget[0] <= 0:
            if certify:
                raise ToleranceNotMet(f"panel [{lo:.3g}, {hi:.3g}] misses tolerance (estimate {err:.2e})")
            return fine, err
        left, e1 = adapt(state, lo, mid, depth + 1)
        right, e2 = adapt(left, mid, hi, depth + 1)
        return right, e1 + e2

    return adapt(state0, a, b, 0)


def _alpha_letters(indices: Sequence[int], tau: TauPoint, terms: int) -> list[Letter]:
    kmax = max(indices) if indices else 0

    def letter(n):
        return lambda s: f_values(s.astype(complex), tau, kmax, terms)[n]

    return [letter(n) for n in indices]


def iterated_integral_alpha(indices, tau, tol: float = 1e-8, terms: int = DEFAULT_TERMS,
                            with_error: bool = False):
    """int_alpha omega^(n_1)...omega^(n_r) for n_1, n_r != 1.

    Interior entries equal to 1 are integrated best-effort (no certificate).
    """
    tau = _tau(tau)
    idx = tuple(indices.entries if isinstance(indices, MultiIndex) else indices)
    if idx and (idx[0] == 1 or idx[-1] == 1):
        raise BoundaryOne(f"I{idx} needs tangential-basepoint regularization")
    if not idx:
        return (1.0 + 0j, 0.0) if with_error else 1.0 + 0j
    certify = 1 not in idx
    state, err = iterated_integral(_alpha_letters(idx, tau, terms), 0.0, 1.0, tol / 10, certify=certify)
    val = complex(state[-1])
    return (val, err) if with_error else val


def eval_emzv_series(s: EMZVSeries, tau, tol: float = 1e-8) -> complex:
    """Substitute T = 2 pi i and q = exp(2 pi i tau)."""
    tau = _tau(tau)
    if not s.constant_known:
        raise UnknownConstant(f"constant of I{s.index} is unknown")
    q = tau.q
    if abs(q) ** (s.order + 1) >= tol / 10:
        raise ValueError(f"order {s.order} too low for |q| = {abs(q):.3g} at tolerance {tol:g}")
    return s.constant.evaluate(TWO_PI_I) + s.qpart.evaluate(q, TWO_PI_I)


def cross_validate(indices, tau, order: int = 40, tol: float = 1e-6) -> dict:
    tau = _tau(tau)
    idx = indices if isinstance(indices, MultiIndex) else MultiIndex(tuple(indices))
    series = eval_emzv_series(emzv_qexpansion(idx, order), tau, tol)
    num, err = iterated_integral_alpha(idx, tau, tol=min(tol, 1e-8) / 10, with_error=True)
    diff = abs(num - series)
    return {"index": str(idx), "tau": str(tau.tau), "order": order, "numeric": num, "series": series,
            "abs_diff": diff, "error_estimate": err, "tol": tol, "ok": bool(diff < tol)}


# ---------------------------------------------------------------------------
# pointwise identities

def _sample_points(tau: TauPoint, n: int, rng: np.random.Generator, margin: float = 0.05) -> np.ndarray:
    s = rng.uniform(margin, 1 - margin, n)
    r = rng.uniform(margin, 1 - margin, n)
    return s + r * tau.tau


def _fay_rhs(m: int, n: int, f1, f2, f12, f21) -> np.ndarray:
    """Right side of the Fay identity in f^(k); f1[k] = f^(k)(xi_1),
    f12[k] = f^(k)(xi_1 - xi_2), f21[k] = f^(k)(xi_2 - xi_1)."""
    from .emzv import binom_ext

    out = -(-1) ** n * f12[m + n]
    for r in range(n + 1):
        out = out + binom_ext(m + r - 1, m - 1) * f21[n - r] * f1[m + r]
    for r in range(m + 1):
        out = out + binom_ext(n + r - 1, n - 1) * f12[m - r] * f2[n + r]
    return out


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))))


def check_properties(tau, samples: int = 20, kmax: int = 8, tol: float = 1e-8, seed: int = 0,
                     terms: int = DEFAULT_TERMS) -> dict:
    """Residuals of double periodicity, parity, Fay and S-transformation of f^(k).

    Residuals are max |a - b| / max(1, |a|, |b|) over sample points and k.
    The S-transformation compared is f^(k)_{-1/tau}(xi/tau) = tau^k f^(k)_tau(xi),
    i.e. exp(2 pi i r alpha) F scales by tau under (xi, alpha, tau) ->
    (xi/tau, alpha/tau, -1/tau).
    """
    tau = _tau(tau)
    rng = np.random.default_rng(seed)
    x1 = _sample_points(tau, samples, rng)
    x2 = _sample_points(tau, samples, rng)
    bad = lattice_distance(x1 - x2, tau) < 0.05
    while np.any(bad):
        x2[bad] = _sample_points(tau, int(bad.sum()), rng)
        bad = lattice_distance(x1 - x2, tau) < 0.05
    f = lambda x, t=tau: f_values(x, t, kmax, terms)
    f1 = f(x1)
    res = {
        "periodicity_1": _rel(f(x1 + 1), f1),
        "periodicity_tau": _rel(f(x1 + tau.tau), f1),
        "parity": _rel(f(-x1), f1 * np.array([(-1) ** k for k in range(kmax + 1)])[:, None]),
    }
    f2, f12, f21 = f(x2), f(x1 - x2), f(x2 - x1)
    fay = 0.0
    for m in range(kmax + 1):
        for n in range(kmax + 1 - m):
            fay = max(fay, _rel(f1[m] * f2[n], _fay_rhs(m, n, f1, f2, f12, f21)))
    res["fay"] = fay
    st = tau.s_transform()
    fs = f_values(x1 / tau.tau, st, kmax, terms)
    scale = np.array([tau.tau ** k for k in range(kmax + 1)])[:, None]
    res["s_transform"] = _rel(fs, scale * f1)
    return {"tau": str(tau.tau), "samples": samples, "kmax": kmax, "tol": tol, "residuals": res,
            "ok": all(v < tol for v in res.values())}
