"""Exact arithmetic: rationals, Laurent polynomials in T = 2*pi*i, truncated
q-series with such coefficients, and dense linear algebra over Q.

Rationals are :class:`fractions.Fraction`.  Everything here is immutable and
exact; there is no floating-point path except :meth:`TPoly.evaluate` and
:meth:`QSeries.evaluate`, which substitute complex numbers for T and q.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import NonSquare, NonzeroConstantTerm

Rational = Fraction

__all__ = [
    "Rational", "TPoly", "QSeries", "RatMatrix",
    "qseries_mul", "qseries_integrate_tau", "mat_rank", "mat_kernel", "mat_det",
    "flatten_series",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


def format_rational(x: Fraction) -> str:
    """Canonical decimal-free form: ``p`` or ``p/q``."""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class TPoly:
    """Laurent polynomial in T with rational coefficients.

    ``TPoly({2: Fraction(-1, 24)})`` is -T^2/24, i.e. zeta(2).
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = _frac(c)
                if c:
                    clean[int(e)] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def monomial(cls, coeff, exponent: int = 0) -> "TPoly":
        return cls({exponent: coeff})

    @classmethod
    def coerce(cls, x) -> "TPoly":
        return x if isinstance(x, TPoly) else cls({0: x})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def coeff(self, e: int) -> Fraction:
        return self._terms.get(e, Fraction(0))

    def exponents(self) -> tuple[int, ...]:
        return tuple(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TPoly.coerce(other)
        if not isinstance(other, TPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other):
        other = TPoly.coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return TPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return TPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-TPoly.coerce(other))

    def __rsub__(self, other):
        return TPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TPoly({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, TPoly):
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return TPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, TPoly) and len(other._terms) == 1:
            (e, c), = other._terms.items()
            return TPoly({k - e: v / c for k, v in self._terms.items()})
        raise TypeError("division only by rationals or T-monomials")

    def shift(self, k: int) -> "TPoly":
        """Multiply by T**k."""
        return TPoly({e + k: c for e, c in self._terms.items()})

    def evaluate(self, t: complex = 2j * math.pi) -> complex:
        return sum(float(c) * t ** e for e, c in self._terms.items())

    def __repr__(self):
        return f"TPoly({self._terms!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            parts.append(format_rational(c) if e == 0 else f"{format_rational(c)}*T^{e}")
        return " + ".join(parts)


_ZERO_T = TPoly()


class QSeries:
    """Truncated power series sum_{n=0}^{M} a_n q^n with a_n in Q[T, 1/T].

    Stored densely per T-exponent, so that multiplication is a handful of
    rational convolutions rather than a dense product of TPoly objects.
    """

    __slots__ = ("_order", "_rows")

    def __init__(self, order: int, coeffs: Sequence[object] = ()):
        if order < 0:
            raise ValueError("order must be nonnegative")
        if len(coeffs) > order + 1:
            raise ValueError(f"{len(coeffs)} coefficients do not fit order {order}")
        rows: dict[int, list[Fraction]] = {}
        for n, c in enumerate(coeffs):
            for e, v in TPoly.coerce(c)._terms.items():
                rows.setdefault(e, [Fraction(0)] * (order + 1))[n] = v
        self._order = order
        self._rows = {e: tuple(r) for e, r in sorted(rows.items())}

    @classmethod
    def _from_rows(cls, order: int, rows: Mapping[int, Sequence[Fraction]]) -> "QSeries":
        s = cls.__new__(cls)
        s._order = order
        s._rows = {e: tuple(r) for e, r in sorted(rows.items()) if any(r)}
        return s

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls._from_rows(order, {})

    @classmethod
    def constant(cls, c, order: int) -> "QSeries":
        return cls(order, [TPoly.coerce(c)])

    @classmethod
    def from_row(cls, order: int, exponent: int, values: Sequence[object]) -> "QSeries":
        """Series whose q^n coefficient is values[n] * T^exponent."""
        row = [_frac(v) for v in values][: order + 1]
        row += [Fraction(0)] * (order + 1 - len(row))
        return cls._from_rows(order, {exponent: row})

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> tuple[TPoly, ...]:
        return tuple(self[n] for n in range(self._order + 1))

    def __getitem__(self, n: int) -> TPoly:
        if not 0 <= n <= self._order:
            raise IndexError(n)
        return TPoly({e: r[n] for e, r in self._rows.items()})

    @property
    def rows(self) -> dict[int, tuple[Fraction, ...]]:
        return dict(self._rows)

    def exponents(self) -> tuple[int, ...]:
        return tuple(self._rows)

    def q_support_exponents(self, start: int = 1) -> set[int]:
        """T-exponents occurring in coefficients of q^n for n >= start."""
        return {e for e, r in self._rows.items() if any(r[start:])}

    def is_zero(self) -> bool:
        return not self._rows

    def constant_term(self) -> TPoly:
        return self[0]

    def qpart(self) -> "QSeries":
        return QSeries._from_rows(self._order, {e: (Fraction(0),) + r[1:] for e, r in self._rows.items()})

    def truncate(self, order: int) -> "QSeries":
        if order > self._order:
            raise ValueError(f"cannot raise order {self._order} to {order}")
        return QSeries._from_rows(order, {e: r[: order + 1] for e, r in self._rows.items()})

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._order == other._order and self._rows == other._rows

    def __hash__(self):
        return hash((self._order, tuple(self._rows.items())))

    def _common(self, other: "QSeries"):
        m = min(self._order, other._order)
        return m, self.truncate(m)._rows, other.truncate(m)._rows

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        m, a, b = self._common(other)
        rows = {e: list(r) for e, r in a.items()}
        for e, r in b.items():
            if e in rows:
                rows[e] = [x + y for x, y in zip(rows[e], r)]
            else:
                rows[e] = list(r)
        return QSeries._from_rows(m, rows)

    def __neg__(self):
        return QSeries._from_rows(self._order, {e: [-x for x in r] for e, r in self._rows.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "QSeries":
        """Multiply every coefficient by a rational or a TPoly."""
        c = TPoly.coerce(c)
        rows: dict[int, list[Fraction]] = {}
        for ec, v in c._terms.items():
            for e, r in self._rows.items():
                acc = rows.setdefault(e + ec, [Fraction(0)] * (self._order + 1))
                for n, x in enumerate(r):
                    if x:
                        acc[n] += v * x
        return QSeries._from_rows(self._order, rows)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, TPoly)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        m, a, b = self._common(other)
        rows: dict[int, list[Fraction]] = {}
        for e1, r1 in a.items():
            nz1 = [(i, x) for i, x in enumerate(r1) if x]
            for e2, r2 in b.items():
                nz2 = [(j, y) for j, y in enumerate(r2) if y]
                acc = rows.setdefault(e1 + e2, [Fraction(0)] * (m + 1))
                for i, x in nz1:
                    for j, y in nz2:
                        if i + j > m:
                            break
                        acc[i + j] += x * y
        return QSeries._from_rows(m, rows)

    __rmul__ = __mul__

    def derivative_tau(self) -> "QSeries":
        """Apply 2*pi*i d/dtau, i.e. q^n -> n*T^2*q^n."""
        return QSeries._from_rows(
            self._order, {e + 2: [n * x for n, x in enumerate(r)] for e, r in self._rows.items()})

    def integrate_tau(self) -> "QSeries":
        """Inverse of :meth:`derivative_tau` on series with zero q^0 term."""
        if any(r[0] for r in self._rows.values()):
            raise NonzeroConstantTerm(f"q^0 coefficient is {self[0]}")
        return QSeries._from_rows(
            self._order,
            {e - 2: [Fraction(0)] + [x / n for n, x in enumerate(r) if n] for e, r in self._rows.items()})

    def flatten(self, exponents: Iterable[int], start: int = 1) -> list[Fraction]:
        """One rational per (q-power, T-exponent) slot, q-powers start..order."""
        out = []
        zero = (Fraction(0),) * (self._order + 1)
        for e in exponents:
            out.extend(self._rows.get(e, zero)[start:])
        return out

    def evaluate(self, q: complex, t: complex = 2j * math.pi) -> complex:
        total = 0j
        for e, r in self._rows.items():
            te = t ** e
            qn = 1.0 + 0j
            for x in r:
                if x:
                    total += float(x) * te * qn
                qn *= q
        return total

    def __repr__(self):
        return f"QSeries(order={self._order}, {self.terms_str()})"

    def terms_str(self) -> str:
        parts = []
        for n in range(self._order + 1):
            c = self[n]
            if c:
                parts.append(f"({c})*q^{n}")
        return " + ".join(parts) or "0"


def qseries_mul(a: QSeries, b: QSeries) -> QSeries:
    """Truncated Cauchy product at order min(a.order, b.order)."""
    return a * b


def qseries_integrate_tau(s: QSeries) -> QSeries:
    return s.integrate_tau()


def flatten_series(series: Sequence[QSeries], exponents: Iterable[int], start: int = 1) -> "RatMatrix":
    exps = list(exponents)
    return RatMatrix([s.flatten(exps, start) for s in series])


# ---------------------------------------------------------------------------
# linear algebra

def _integerize(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], list[int]]:
    """Scale each row by the lcm of its denominators."""
    out, scales = [], []
    for row in rows:
        d = math.lcm(*(x.denominator for x in row)) if row else 1
        out.append([x.numerator * (d // x.denominator) for x in row])
        scales.append(d)
    return out, scales


def _primitive(row: list[int]) -> list[int]:
    g = math.gcd(*row)
    if g > 1:
        return [x // g for x in row]
    return row


def _echelon(rows: list[list[int]], ncols: int, jordan: bool) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row reduction of an integer matrix.

    Rows are kept primitive (content divided out) after every update, which
    keeps entries near the size of the relevant minors.  Returns the nonzero
    reduced rows and their pivot columns.
    """
    work = [_primitive(list(r)) for r in rows if any(r)]
    done: list[list[int]] = []
    pivots: list[int] = []
    for c in range(ncols):
        cand = [i for i, r in enumerate(work) if r[c]]
        if not cand:
            continue
        best = min(cand, key=lambda i: abs(work[i][c]))
        prow = work.pop(best)
        p = prow[c]
        if p < 0:
            prow = [-x for x in prow]
            p = -p
        nxt = []
        for r in work:
            a = r[c]
            if a:
                r = _primitive([p * x - a * y for x, y in zip(r, prow)])
                if not any(r):
                    continue
            nxt.append(r)
        work = nxt
        if jordan:
            for k, r in enumerate(done):
                a = r[c]
                if a:
                    done[k] = _primitive([p * x - a * y for x, y in zip(r, prow)])
        done.append(prow)
        pivots.append(c)
        if not work:
            break
    return done, pivots


class RatMatrix:
    """Dense matrix over Q."""

    __slots__ = ("_entries", "rows", "cols")

    def __init__(self, entries: Sequence[Sequence[object]], cols: int | None = None):
        ent = tuple(tuple(_frac(x) for x in row) for row in entries)
        if cols is None:
            cols = len(ent[0]) if ent else 0
        if any(len(r) != cols for r in ent):
            raise ValueError("ragged matrix")
        self._entries = ent
        self.rows = len(ent)
        self.cols = cols

    @property
    def entries(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._entries

    def __getitem__(self, ij):
        i, j = ij
        return self._entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._entries) == (other.rows, other.cols, other._entries)

    def __hash__(self):
        return hash(self._entries)

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols})"

    def transpose(self) -> "RatMatrix":
        return RatMatrix([list(c) for c in zip(*self._entries)] if self.rows else [], cols=self.rows)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other._entries))
        return RatMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self._entries],
                         cols=other.cols)

    def apply(self, v: Sequence[object]) -> list[Fraction]:
        v = [_frac(x) for x in v]
        return [sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self._entries]

    def delete_row(self, i: int) -> "RatMatrix":
        return RatMatrix(self._entries[:i] + self._entries[i + 1:], cols=self.cols)

    def rank(self) -> int:
        if not self.rows or not self.cols:
            return 0
        ints, _ = _integerize(self._entries)
        return len(_echelon(ints, self.cols, jordan=False)[1])

    def rref(self) -> tuple["RatMatrix", list[int]]:
        """Reduced row echelon form (nonzero rows only) and pivot columns."""
        ints, _ = _integerize(self._entries)
        red, piv = _echelon(ints, self.cols, jordan=True)
        order = sorted(range(len(piv)), key=lambda k: piv[k])
        out = []
        for k in order:
            r, p = red[k], red[k][piv[k]]
            out.append([Fraction(x, p) for x in r])
        return RatMatrix(out, cols=self.cols), sorted(piv)

    def kernel(self) -> list[list[Fraction]]:
        """Basis of {v : M v = 0}, one vector per free column, in
        reduced echelon form (each vector has a 1 in its free column and 0 in
        the other free columns)."""
        if not self.rows:
            return [[Fraction(int(i == j)) for i in range(self.cols)] for j in range(self.cols)]
        red, piv = self.rref()
        free = [c for c in range(self.cols) if c not in set(piv)]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for r, p in zip(red.entries, piv):
                v[p] = -r[f]
            basis.append(v)
        return basis

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise NonSquare(f"{self.rows}x{self.cols} matrix has no determinant")
        n = self.rows
        if n == 0:
            return Fraction(1)
        a, scales = _integerize(self._entries)
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return Fraction(0)
            akk = a[k][k]
            for i in range(k + 1, n):
                aik = a[i][k]
                row_i, row_k = a[i], a[k]
                for j in range(k + 1, n):
                    row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            prev = akk
        return Fraction(sign * a[n - 1][n - 1], math.prod(scales))


def mat_rank(m: RatMatrix) -> int:
    return m.rank()


def mat_kernel(m: RatMatrix) -> list[list[Fraction]]:
    return m.kernel()


def mat_det(m: RatMatrix) -> Fraction:
    return m.det()
