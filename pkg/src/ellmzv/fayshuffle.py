"""The length-two Fay-shuffle space and the polynomial space W_N.

An element of V'_N is stored by its coefficients c_0..c_N in the basis
X^{i-1} Y^{N-1-i}.  The Fay equation
P(X,Y) + P(X+Y,-Y) + P(-X-Y,X) = 0 is multiplied through by XY(X+Y), after
which both defining equations become identities between homogeneous
polynomials of degree N+1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import EvenWeight
from .exactcore import RatMatrix

__all__ = [
    "HomogLaurent", "HomogPoly", "fsh_system", "fsh_dim", "fsh_basis", "fsh_pol_dim",
    "fsh_check", "ptilde", "w_system", "w_dim", "w_basis", "hilbert_wn",
]


@dataclass(frozen=True)
class HomogLaurent:
    """sum_i coeffs[i] * X^(i-1) * Y^(N-1-i), homogeneous of degree N-2."""

    weight: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coeffs)
        if len(cs) != self.weight + 1:
            raise ValueError(f"weight {self.weight} needs {self.weight + 1} coefficients")
        object.__setattr__(self, "coeffs", cs)

    def is_polynomial(self) -> bool:
        return not self.coeffs[0] and not self.coeffs[-1]

    def __call__(self, x, y):
        x, y = Fraction(x), Fraction(y)
        N = self.weight
        return sum((c * x ** (i - 1) * y ** (N - 1 - i) for i, c in enumerate(self.coeffs) if c), Fraction(0))

    def __str__(self):
        parts = [f"{c}*X^{i - 1}*Y^{self.weight - 1 - i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class HomogPoly:
    """sum_a coeffs[a] * X^a * Y^(N-a)."""

    degree: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coeffs)
        if len(cs) != self.degree + 1:
            raise ValueError(f"degree {self.degree} needs {self.degree + 1} coefficients")
        object.__setattr__(self, "coeffs", cs)

    def __call__(self, x, y):
        x, y = Fraction(x), Fraction(y)
        return sum((c * x ** a * y ** (self.degree - a) for a, c in enumerate(self.coeffs) if c), Fraction(0))


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _expand(degree: int, terms: Iterable[tuple[int, int, int, int]]) -> list[int]:
    """Coefficients (by X-exponent) of sum coef * X^p * Y^q * (X+Y)^s."""
    out = [0] * (degree + 1)
    for coef, p, q, s in terms:
        if not coef:
            continue
        if p < 0 or q < 0 or p + q + s != degree:
            raise ValueError("term is not a homogeneous polynomial of the requested degree")
        for t in range(s + 1):
            out[p + t] += coef * math.comb(s, t)
    return out


def _fay_columns(N: int) -> list[list[int]]:
    """For each basis element, the Fay and shuffle images times XY(X+Y)."""
    cols = []
    for i in range(N + 1):
        neg_y = _sign(N - 1 - i)
        fay = _expand(N + 1, [
            (1, i, N - i, 1),  # P(X, Y)
            (neg_y, 1, N - i, i),  # P(X+Y, -Y)
            (_sign(i - 1), N - i, 1, i),  # P(-X-Y, X)
        ])
        shuf = _expand(N + 1, [(1, i, N - i, 1), (1, N - i, i, 1)])
        cols.append(fay + shuf)
    return cols


def fsh_system(N: int) -> RatMatrix:
    """Matrix whose kernel is FSh_2(N), in the coordinates c_0..c_N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    cols = _fay_columns(N)
    return RatMatrix([list(r) for r in zip(*cols)], cols=N + 1)


def fsh_basis(N: int) -> list[HomogLaurent]:
    return [HomogLaurent(N, tuple(v)) for v in fsh_system(N).kernel()]


def fsh_dim(N: int) -> int:
    m = fsh_system(N)
    return m.cols - m.rank()


def fsh_pol_dim(N: int) -> int:
    """Dimension of the polynomial part (no poles: c_0 = c_N = 0)."""
    m = fsh_system(N)
    extra = [[int(j == 0) for j in range(N + 1)], [int(j == N) for j in range(N + 1)]]
    full = RatMatrix(list(m.entries) + extra, cols=N + 1)
    return full.cols - full.rank()


def fsh_check(P: HomogLaurent) -> bool:
    """Exactly test both Fay-shuffle equations for P."""
    image = fsh_system(P.weight).apply(P.coeffs)
    return not any(image)


def ptilde(N: int) -> HomogLaurent:
    """X^{N-1}/Y - Y^{N-1}/X - (X^{N-1} - Y^{N-1})/(X+Y) for odd N."""
    if N % 2 == 0 or N < 1:
        raise EvenWeight(f"the pole element needs odd N >= 1, got {N}")
    c = [Fraction(0)] * (N + 1)
    c[N] += 1
    c[0] -= 1
    # -(X^e - Y^e)/(X+Y) = sum_{i=0}^{e-1} (-1)^i X^i Y^{e-1-i}, e = N-1
    for i in range(N - 1):
        c[i + 1] += _sign(i)
    return HomogLaurent(N, tuple(c))


def w_system(N: int) -> RatMatrix:
    """Kernel = W_N: P(X,Y)+P(Y,X) = 0 and P(X,Y)+P(Y,-X-Y)+P(-X-Y,X) = 0."""
    cols = []
    for k in range(N + 1):
        shuf = _expand(N, [(1, k, N - k, 0), (1, N - k, k, 0)])
        cyc = _expand(N, [
            (1, k, N - k, 0),  # X^k Y^{N-k}
            (_sign(N - k), 0, k, N - k),  # Y^k (-X-Y)^{N-k}
            (_sign(k), N - k, 0, k),  # (-X-Y)^k X^{N-k}
        ])
        cols.append(shuf + cyc)
    return RatMatrix([list(r) for r in zip(*cols)], cols=N + 1)


def w_basis(N: int) -> list[HomogPoly]:
    return [HomogPoly(N, tuple(v)) for v in w_system(N).kernel()]


def w_dim(N: int) -> int:
    m = w_system(N)
    return m.cols - m.rank()


def _series_div(num: Sequence[int], den: Sequence[int], n_terms: int) -> list[Fraction]:
    out: list[Fraction] = []
    d0 = Fraction(den[0])
    for n in range(n_terms):
        acc = Fraction(num[n] if n < len(num) else 0)
        for k in range(1, min(n, len(den) - 1) + 1):
            acc -= den[k] * out[n - k]
        out.append(acc / d0)
    return out


def hilbert_wn(max_n: int) -> list[int]:
    """Coefficients of t^0..t^max_n in t / ((1-t)^2 (1+t+t^2))."""
    den = [1]
    for factor in ([1, -1], [1, -1], [1, 1, 1]):
        new = [0] * (len(den) + len(factor) - 1)
        for i, a in enumerate(den):
            for j, b in enumerate(factor):
                new[i + j] += a * b
        den = new
    coeffs = _series_div([0, 1], den, max_n + 1)
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("Hilbert series has non-integral coefficients")
    return [int(c) for c in coeffs]
