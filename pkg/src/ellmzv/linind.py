"""Linear independence of elliptic double zeta values.

The matrix C_N collects, for 0 <= r <= floor(N/3), the coefficients of
G_{N+1-2s} * I(2s) in 2*pi*i d/dtau I(r, N-r).  It is read off the generic
derivative operator, never typed in.  The binomial matrices M_n, L_n, U_n
certify invertibility of its interior block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .emzv import MultiIndex, derivative_expansion
from .errors import EvenWeight
from .exactcore import RatMatrix

__all__ = [
    "CMatrix", "matrix_C", "verify_rank_C", "interior_block",
    "BinomMatrix", "binom_matrix", "det_M", "double_factorial", "verify_LU", "verify_binom_identity",
]


def _c(a: int, b: int) -> int:
    # standard convention: zero outside 0 <= b <= a (a may be negative)
    if a < 0 or b < 0 or b > a:
        return 0
    return math.comb(a, b)


@dataclass(frozen=True)
class CMatrix:
    weight: int
    matrix: RatMatrix

    @property
    def k(self) -> int:
        return self.weight // 3

    def row(self, r: int) -> tuple[Fraction, ...]:
        return self.matrix.entries[r]


def matrix_C(N: int) -> CMatrix:
    if N % 2 == 0 or N < 1:
        raise EvenWeight(f"C_N is defined for odd N >= 1, got {N}")
    k = N // 3
    ncols = (N + 3) // 2
    rows = []
    for r in range(k + 1):
        exp = derivative_expansion((r, N - r)).as_dict()
        rows.append([exp.get((N + 1 - 2 * s, MultiIndex((2 * s,))), Fraction(0)) for s in range(ncols)])
    return CMatrix(N, RatMatrix(rows, cols=ncols))


def interior_block(N: int) -> RatMatrix:
    """Rows r = 1..k and columns s = 1..k of C_N."""
    c = matrix_C(N)
    k = c.k
    return RatMatrix([[c.matrix[r, s] for s in range(1, k + 1)] for r in range(1, k + 1)], cols=k)


def verify_rank_C(N: int) -> bool:
    """True iff Lambda * C_N = 0 forces Lambda = 0."""
    c = matrix_C(N)
    return not c.matrix.transpose().kernel()


@dataclass(frozen=True)
class BinomMatrix:
    n: int
    kind: str
    matrix: RatMatrix


def _m_entry(i: int, j: int) -> int:
    return _c(2 * j + 1, i) - (1 if 2 * j + 1 == i else 0)


def _l_entry(i: int, j: int) -> int:
    return _c(j, i - j)


def _u_entry(i: int, j: int) -> Fraction:
    if i == 0:
        return Fraction(1)
    if i < 2 * j + 1:
        return Fraction(_c(2 * j - i, i - 1) * (2 * j + 1), i)
    return Fraction(0)


_ENTRY = {"M": _m_entry, "L": _l_entry, "U": _u_entry}


def binom_matrix(n: int, kind: str) -> BinomMatrix:
    """The (n+1) x (n+1) matrix M_n, L_n or U_n, indices 0..n."""
    f = _ENTRY[kind]
    return BinomMatrix(n, kind, RatMatrix([[f(i, j) for j in range(n + 1)] for i in range(n + 1)]))


def double_factorial(m: int) -> int:
    return math.prod(range(m, 0, -2))


def det_M(n: int) -> Fraction:
    if n < 1:
        raise ValueError("n must be positive")
    return binom_matrix(n, "M").matrix.det()


def verify_LU(n: int, u_override: dict | None = None) -> bool:
    """M_n == L_n U_n, det L_n == 1, det U_n == (2n+1)!!.

    ``u_override`` maps (i, j) to a replacement entry of U_n, for negative
    controls.
    """
    M = binom_matrix(n, "M").matrix
    L = binom_matrix(n, "L").matrix
    U = binom_matrix(n, "U").matrix
    if u_override:
        ent = [list(r) for r in U.entries]
        for (i, j), v in u_override.items():
            ent[i][j] = Fraction(v)
        U = RatMatrix(ent)
    return L @ U == M and L.det() == 1 and U.det() == double_factorial(2 * n + 1)


def verify_binom_identity(a: int, b: int) -> bool:
    lhs = _c(a, b)
    rhs = sum(_c(a - b + k, k) * _c(a - b + 1, a - 2 * b + 2 * k + 1) for k in range(b + 1))
    return lhs == rhs
