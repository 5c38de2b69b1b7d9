"""Bernoulli numbers, even zeta values, divisor sums and Eisenstein series.

Conventions: T = 2*pi*i and q = exp(T*tau).  For k >= 1

    G_{2k} = 2*zeta(2k) + 2*T^{2k}/(2k-1)! * sum_{n>=1} sigma_{2k-1}(n) q^n,

G_0 = -1, and G_j = 0 for odd j.  Even zeta values are T-monomials,
zeta(2k) = -B_{2k} T^{2k} / (2*(2k)!).
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NonzeroConstantTerm, OddIndex, WeightMismatch
from .exactcore import QSeries, TPoly

__all__ = [
    "bernoulli", "bernoulli_table", "zeta_even", "divisor_sigma",
    "EisensteinSeries", "eisenstein_q", "IndefEisenstein", "indefinite_eisenstein",
    "EisCombination",
]

_bern: list[Fraction] = [Fraction(1)]
_bern_lock = threading.Lock()


def bernoulli(n: int) -> Fraction:
    """B_n from t/(e^t - 1), so B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n < len(_bern):
        return _bern[n]
    with _bern_lock:
        # sum_{k=0}^{m} C(m+1, k) B_k = 0 for m >= 1
        for m in range(len(_bern), n + 1):
            if m > 1 and m % 2:
                _bern.append(Fraction(0))
                continue
            s = sum(math.comb(m + 1, k) * _bern[k] for k in range(m))
            _bern.append(-s / (m + 1))
    return _bern[n]


def bernoulli_table(n: int) -> list[Fraction]:
    """[B_0, ..., B_n]."""
    bernoulli(n)
    return _bern[: n + 1]


def zeta_even(j: int) -> TPoly:
    if j < 0 or j % 2:
        raise OddIndex(f"zeta_even needs an even nonnegative argument, got {j}")
    return TPoly.monomial(-bernoulli(j) / (2 * math.factorial(j)), j)


def divisor_sigma(m: int, n: int) -> int:
    """sigma_m(n) = sum of d**m over the divisors d of n."""
    if n < 1:
        raise ValueError("n must be positive")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d ** m
            e = n // d
            if e != d:
                total += e ** m
        d += 1
    return total


@dataclass(frozen=True)
class EisensteinSeries:
    index: int
    series: QSeries

    @property
    def weight(self) -> int:
        return self.index

    @property
    def order(self) -> int:
        return self.series.order


def eisenstein_q(j: int, order: int) -> EisensteinSeries:
    """G_j to q^order.  Odd j gives the zero series."""
    if j < 0:
        raise ValueError("index must be nonnegative")
    if j % 2:
        return EisensteinSeries(j, QSeries.zero(order))
    if j == 0:
        return EisensteinSeries(0, QSeries.constant(-1, order))
    scale = Fraction(2, math.factorial(j - 1))
    row = [2 * zeta_even(j).coeff(j)] + [scale * divisor_sigma(j - 1, n) for n in range(1, order + 1)]
    return EisensteinSeries(j, QSeries.from_row(order, j, row))


@dataclass(frozen=True)
class IndefEisenstein:
    """tau_coeff * tau + qpart, the indefinite integral of G_{2k}.

    The q-part is the integral of G_{2k} - 2*zeta(2k) from tau to i*infinity,
    so its q^n coefficient is -g_n/(T*n).
    """

    index: int
    tau_coeff: TPoly
    qpart: QSeries

    @property
    def weight(self) -> int:
        return self.index

    def dtau(self) -> QSeries:
        """Plain d/dtau of the function, as a q-series."""
        q = self.qpart.derivative_tau().scale(TPoly.monomial(1, -1))
        return q + QSeries.constant(self.tau_coeff, self.qpart.order)


def indefinite_eisenstein(j: int, order: int) -> IndefEisenstein:
    if j < 0 or j % 2:
        raise OddIndex(f"indefinite Eisenstein integral needs an even index, got {j}")
    g = eisenstein_q(j, order).series
    twozeta = zeta_even(j) * 2
    shifted = g - QSeries.constant(twozeta, order)
    if shifted[0]:
        raise NonzeroConstantTerm(f"G_{j} - 2 zeta({j}) is not O(q)")
    # integral_tau^{i oo} q^n dtau' = -q^n / (T n)
    rows = {e - 1: [Fraction(0)] + [-x / n for n, x in enumerate(r) if n] for e, r in shifted.rows.items()}
    qpart = QSeries._from_rows(order, rows)
    return IndefEisenstein(j, twozeta, qpart)


@dataclass(frozen=True)
class EisCombination:
    """Element of the Q-span of T^j * (indefinite G_{2k}), tagged by weight.

    ``terms`` maps (j, 2k) to a rational coefficient; every term has weight
    j + 2k equal to ``weight``.
    """

    weight: int
    terms: dict = field(default_factory=dict)

    @classmethod
    def basis(cls, t_power: int, index: int) -> "EisCombination":
        if index % 2 or index < 0:
            raise OddIndex(index)
        return cls(t_power + index, {(t_power, index): Fraction(1)})

    def __add__(self, other: "EisCombination") -> "EisCombination":
        if self.weight != other.weight:
            raise WeightMismatch(f"cannot add weight {self.weight} and weight {other.weight}")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return EisCombination(self.weight, {k: v for k, v in out.items() if v})

    def scale(self, c) -> "EisCombination":
        return EisCombination(self.weight, {k: v * c for k, v in self.terms.items() if v * c})

    def realize(self, order: int) -> tuple[TPoly, QSeries]:
        """(coefficient of tau, q-series part)."""
        tau = TPoly()
        q = QSeries.zero(order)
        for (tp, ix), c in sorted(self.terms.items()):
            ie = indefinite_eisenstein(ix, order)
            factor = TPoly.monomial(c, tp)
            tau = tau + ie.tau_coeff * factor
            q = q + ie.qpart.scale(factor)
        return tau, q
