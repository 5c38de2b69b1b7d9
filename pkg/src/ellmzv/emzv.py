"""q-expansions of A-elliptic multiple zeta values I(n_1,...,n_r; tau).

The pipeline: constant terms are known in lengths one and two; the
derivative 2*pi*i d/dtau of a length-r value is a finite Q-combination of
G_j * I(lower) with lower of length r-1 (:func:`derivative_expansion`);
integrating that right-hand side term by term in q gives the q-part.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .eisenstein import bernoulli, eisenstein_q, zeta_even
from .errors import EvenWeight, NonzeroConstantTerm, UnknownConstant, UnsupportedLength
from .exactcore import QSeries, RatMatrix, TPoly

__all__ = [
    "MultiIndex", "DerivativeExpansion", "EMZVSeries", "UNKNOWN",
    "binom_std", "binom_ext", "compositions",
    "emzv_length1", "constant_term", "derivative_expansion", "rhs_series", "emzv_qexpansion",
    "series_matrix", "verify_relations_len2", "RelationReport",
    "grlen2_rank", "grlen2_value_rank", "length3_derivative_rank", "dim_row", "dim_table", "default_order",
    "D_LOW_3",
]

# lower bounds for dim gr_3 in even weight, as tabulated in the literature
D_LOW_3 = {0: 0, 2: 2, 4: 3, 6: 5, 8: 8, 10: 11, 12: 14, 14: 19, 16: 23, 18: 28, 20: 34}


def default_order(weight: int) -> int:
    return weight + 20


@dataclass(frozen=True, order=True)
class MultiIndex:
    entries: tuple[int, ...]

    def __post_init__(self):
        ent = tuple(int(x) for x in self.entries)
        if any(x < 0 for x in ent):
            raise ValueError(f"negative entry in {ent}")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def parse(cls, text: str) -> "MultiIndex":
        text = text.strip().strip("()")
        return cls(tuple(int(x) for x in text.split(",") if x.strip()))

    @property
    def weight(self) -> int:
        return sum(self.entries)

    @property
    def length(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __str__(self):
        return "(" + ",".join(map(str, self.entries)) + ")"


def _mi(index) -> MultiIndex:
    return index if isinstance(index, MultiIndex) else MultiIndex(tuple(index))


def compositions(weight: int, length: int) -> list[MultiIndex]:
    """All (n_1..n_r) with n_i >= 0 summing to weight, lexicographic."""
    if length == 0:
        return [MultiIndex(())] if weight == 0 else []
    out = []
    for head in range(weight + 1):
        for tail in compositions(weight - head, length - 1):
            out.append(MultiIndex((head,) + tail.entries))
    return out


def binom_std(a: int, b: int) -> int:
    """C(a, b) for a >= 0, zero outside 0 <= b <= a."""
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def binom_ext(a: int, b: int) -> int:
    """C(a, b) with C(a, b) = 0 unless 0 <= b <= a, except C(-1, -1) = 1.

    This is the convention under which the Fay relation is valid when one of
    the two indices is zero.
    """
    if a == -1 and b == -1:
        return 1
    return binom_std(a, b)


# ---------------------------------------------------------------------------
# length one and constant terms

UNKNOWN = None  # marker for constants that need associator data


def constant_term(index) -> TPoly:
    """Constant term of the q-expansion in lengths one and two."""
    index = _mi(index)
    if index.length == 1:
        n, = index.entries
        if n == 1:
            return TPoly()
        return TPoly.monomial(bernoulli(n) / math.factorial(n), n)
    if index.length == 2:
        m, n = index.entries
        if m == n == 1:
            return TPoly()
        if n == 1:
            return TPoly.monomial(-Fraction(1, 2) * bernoulli(m) * bernoulli(1) / math.factorial(m), m + 1)
        return TPoly.monomial(Fraction(1, 2) * bernoulli(m) * bernoulli(n) / (math.factorial(m) * math.factorial(n)),
                              m + n)
    raise UnsupportedLength(f"constant term of length-{index.length} values is not available")


@dataclass(frozen=True)
class EMZVSeries:
    index: MultiIndex
    constant: TPoly | None
    qpart: QSeries

    @property
    def weight(self) -> int:
        return self.index.weight

    @property
    def length(self) -> int:
        return self.index.length

    @property
    def order(self) -> int:
        return self.qpart.order

    @property
    def constant_known(self) -> bool:
        return self.constant is not None

    def full(self) -> QSeries:
        if self.constant is None:
            raise UnknownConstant(f"constant of I{self.index} is unknown")
        return self.qpart + QSeries.constant(self.constant, self.qpart.order)


def emzv_length1(n: int, order: int = 0) -> EMZVSeries:
    return EMZVSeries(MultiIndex((n,)), constant_term((n,)), QSeries.zero(order))


# ---------------------------------------------------------------------------
# the derivative operator

@dataclass(frozen=True)
class DerivativeExpansion:
    """2*pi*i d/dtau I(index) = sum coeff * G_eis * I(lower)."""

    index: MultiIndex
    terms: tuple[tuple[Fraction, int, MultiIndex], ...]

    def as_dict(self) -> dict[tuple[int, MultiIndex], Fraction]:
        return {(j, low): c for c, j, low in self.terms}

    def coefficient(self, eis_index: int, lower) -> Fraction:
        return self.as_dict().get((eis_index, _mi(lower)), Fraction(0))

    def __len__(self):
        return len(self.terms)


def _pair_coeff(a: int, b: int, j: int, k: int) -> int:
    """Coefficient of X^a Y^b in (j-1)(Y^{j-2} - X^{j-2}) (X+Y)^{k-1}.

    For k = 0 this is read as (j-1)(Y^{j-2} - X^{j-2})/(X+Y), which is a
    Laurent polynomial because j-2 is even.
    """
    if k >= 1:
        return (j - 1) * (binom_std(k - 1, a) - binom_std(k - 1, b))
    e = j - 2
    if e >= 0:
        # (Y^e - X^e)/(X+Y) = sum_{i=0}^{e-1} (-1)^i X^i Y^{e-1-i}
        if 0 <= a <= e - 1 and b == e - 1 - a:
            return (j - 1) * (-1) ** a
        return 0
    # e = -2: X^{-1} Y^{-2} - X^{-2} Y^{-1}
    if (a, b) == (-1, -2):
        return (j - 1)
    if (a, b) == (-2, -1):
        return -(j - 1)
    return 0


def derivative_expansion(index) -> DerivativeExpansion:
    """Coefficient of X_1^{n_1-1}...X_r^{n_r-1} in the differential
    equation for the length-r generating series, with
    wp*(a) = sum_{j even >= 0} (j-1) G_j a^{j-2}."""
    index = _mi(index)
    n = index.entries
    r = len(n)
    acc: dict[tuple[int, MultiIndex], Fraction] = {}

    def add(c, j, lower):
        if c and j % 2 == 0:
            key = (j, MultiIndex(tuple(lower)))
            acc[key] = acc.get(key, 0) + Fraction(c)

    if r >= 1:
        # wp*(X_1) I(X_2..X_r): X_1^{n_1-1} needs j - 2 = n_1 - 1
        add(n[0], n[0] + 1, n[1:])
        add(-n[-1], n[-1] + 1, n[:-1])
    for i in range(r - 1):
        a, b = n[i] - 1, n[i + 1] - 1
        s = n[i] + n[i + 1]
        for j in range(0, s + 2, 2):
            k = s + 1 - j
            add(_pair_coeff(a, b, j, k), j, n[:i] + (k,) + n[i + 2:])
    terms = tuple(sorted(((c, j, low) for (j, low), c in acc.items() if c), key=lambda t: (t[1], t[2].entries)))
    return DerivativeExpansion(index, terms)


# ---------------------------------------------------------------------------
# q-expansions

_memo: dict[tuple[MultiIndex, int], EMZVSeries] = {}
_memo_lock = threading.Lock()


def clear_cache() -> None:
    with _memo_lock:
        _memo.clear()


def rhs_series(index, order: int) -> QSeries:
    """The assembled right-hand side sum c * G_j * I(lower) as a q-series.

    Requires every lower value to have a known constant, so length <= 3.
    """
    index = _mi(index)
    by_eis: dict[int, QSeries] = {}
    for c, j, low in derivative_expansion(index).terms:
        s = emzv_qexpansion(low, order).full().scale(c)
        by_eis[j] = by_eis[j] + s if j in by_eis else s
    total = QSeries.zero(order)
    for j in sorted(by_eis):
        total = total + eisenstein_q(j, order).series * by_eis[j]
    return total


def emzv_qexpansion(index, order: int) -> EMZVSeries:
    """I(index) to q^order.  Lengths 0..3; constants are UNKNOWN in length 3."""
    index = _mi(index)
    key = (index, order)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    r = index.length
    if r == 0:
        res = EMZVSeries(index, TPoly.monomial(1, 0), QSeries.zero(order))
    elif r == 1:
        res = emzv_length1(index[0], order)
    elif r <= 3:
        rhs = rhs_series(index, order)
        if rhs[0]:
            raise NonzeroConstantTerm(f"right-hand side for I{index} has q^0 term {rhs[0]}")
        qpart = rhs.integrate_tau()
        res = EMZVSeries(index, constant_term(index) if r == 2 else UNKNOWN, qpart)
    else:
        raise UnsupportedLength("q-expansions need known constants in length r-1; only r <= 3 is available")
    with _memo_lock:
        return _memo.setdefault(key, res)


# ---------------------------------------------------------------------------
# ranks, relations, dimensions

def exponent_window(weight: int, length: int) -> range:
    """T-exponents that may carry q-coefficients of weight/length values."""
    return range(weight - length, weight + 1)


def series_matrix(series: Sequence[QSeries], window: Iterable[int], start: int = 1) -> RatMatrix:
    window = list(window)
    for s in series:
        extra = s.q_support_exponents(start) - set(window)
        if extra:
            raise ValueError(f"q-coefficients outside the declared T-exponent window: {sorted(extra)}")
    return RatMatrix([s.flatten(window, start) for s in series], cols=len(window) * (series[0].order + 1 - start)
                     if series else 0)


def grlen2_rank(weight: int, order: int | None = None) -> int:
    """Rank over Q of the q-parts of I(r, N-r), 0 <= r <= N, N odd."""
    if weight % 2 == 0:
        raise EvenWeight("grlen2_rank is defined for odd weight")
    order = default_order(weight) if order is None else order
    qs = [emzv_qexpansion(ix, order).qpart for ix in compositions(weight, 2)]
    return series_matrix(qs, exponent_window(weight, 2)).rank()


def grlen2_value_rank(weight: int, order: int | None = None) -> int:
    """dim L_2 - dim L_1 computed from full values (constants included)."""
    order = default_order(weight) if order is None else order
    window = exponent_window(weight, 2)

    def rows(length):
        return [emzv_qexpansion(ix, order).full() for ix in compositions(weight, length)]

    low = rows(1) + ([emzv_qexpansion(MultiIndex(()), order).full()] if weight == 0 else [])
    high = low + rows(2)
    r_low = series_matrix(low, window, start=0).rank() if low else 0
    return series_matrix(high, window, start=0).rank() - r_low


def length3_derivative_rank(weight: int, order: int | None = None) -> int:
    """Rank over Q of the q-parts of all I(n1, n2, n3) of the given weight."""
    order = default_order(weight) if order is None else order
    qs = [emzv_qexpansion(ix, order).qpart for ix in compositions(weight, 3)]
    return series_matrix(qs, exponent_window(weight, 3)).rank()


@dataclass
class RelationReport:
    weight: int
    order: int
    entries: list[dict]

    @property
    def ok(self) -> bool:
        return all(e["ok"] for e in self.entries if e["asserted"])

    def failures(self, asserted_only: bool = True) -> list[dict]:
        return [e for e in self.entries if not e["ok"] and (e["asserted"] or not asserted_only)]


def _fay_rhs(m: int, n: int, get) -> tuple[TPoly, QSeries]:
    """Right-hand side of the Fay relation for I(m, n), split as (constant, q-part)."""
    const = TPoly()
    if m == 1 and n == 1:
        const = const - zeta_even(2) * 3
    terms = [(-(-1) ** n, (0, m + n))]
    for r in range(n + 1):
        terms.append(((-1) ** (n - r) * binom_ext(m - 1 + r, m - 1), (m + r, n - r)))
    for r in range(m + 1):
        terms.append(((-1) ** (n + r) * binom_ext(n - 1 + r, n - 1), (n + r, m - r)))
    q = None
    for c, ix in terms:
        if not c:
            continue
        s = get(ix)
        const = const + s.constant * c
        q = s.qpart.scale(c) if q is None else q + s.qpart.scale(c)
    return const, q


def verify_relations_len2(weight: int, order: int | None = None) -> RelationReport:
    """Check reflection, shuffle and Fay relations among I(m, n), m + n = weight.

    Constants of the Fay relation are asserted only for m, n >= 2; the other
    constant cases are recorded with ``asserted = False``.
    """
    order = default_order(weight) if order is None else order

    def get(ix):
        return emzv_qexpansion(ix, order)

    entries = []

    def record(rel, m, n, part, lhs, rhs, asserted=True):
        ok = lhs == rhs
        e = {"relation": rel, "m": m, "n": n, "part": part, "ok": ok, "asserted": asserted}
        if not ok:
            e["lhs"] = str(lhs) if not isinstance(lhs, QSeries) else lhs.terms_str()
            e["rhs"] = str(rhs) if not isinstance(rhs, QSeries) else rhs.terms_str()
        entries.append(e)

    for m in range(weight + 1):
        n = weight - m
        a, b = get((m, n)), get((n, m))
        sign = (-1) ** weight
        record("reflection", m, n, "constant", a.constant, b.constant * sign)
        record("reflection", m, n, "qpart", a.qpart, b.qpart.scale(sign))
        prod_const = constant_term((m,)) * constant_term((n,))
        record("shuffle", m, n, "constant", a.constant + b.constant, prod_const)
        record("shuffle", m, n, "qpart", a.qpart + b.qpart, QSeries.zero(order))
        c_rhs, q_rhs = _fay_rhs(m, n, get)
        record("fay", m, n, "constant", a.constant, c_rhs, asserted=(m >= 2 and n >= 2))
        record("fay", m, n, "qpart", a.qpart, q_rhs)
    return RelationReport(weight, order, entries)


def dim_row(N: int, order: int | None = None, length3: bool = False) -> dict:
    """D_{N,1} and D_{N,2} at weight N next to their expected values."""
    M = default_order(N) if order is None else order
    # weight-0 constants already lie in L_0 = Q
    d1 = int(N > 0 and not constant_term((N,)).is_zero())
    if N % 2:
        d2 = grlen2_rank(N, M)
    else:
        vanish = all(emzv_qexpansion(ix, M).qpart.is_zero() for ix in compositions(N, 2))
        d2 = 0 if vanish else grlen2_value_rank(N, M)
    d1_exp = 1 if (N > 0 and N % 2 == 0) else 0
    d2_exp = 0 if N % 2 == 0 else N // 3 + 1
    row = {"N": N, "order": M, "D1": d1, "D1_expected": d1_exp, "D2": d2, "D2_expected": d2_exp,
           "ok": d1 == d1_exp and d2 == d2_exp, "provenance": "theorem"}
    if length3:
        row["D3_qpart_rank"] = length3_derivative_rank(N, M)
        if N % 2 == 0:
            row["D3_reference"] = D_LOW_3.get(N)
            row["D3_provenance"] = "paper-table"
        else:
            row["D3_reference"] = (N + 1) // 6
            row["D3_provenance"] = "report-only"
    return row


def dim_table(max_weight: int, order: int | None = None, length3: bool = False) -> list[dict]:
    """:func:`dim_row` for 0 <= N <= max_weight."""
    return [dim_row(N, order, length3) for N in range(max_weight + 1)]
