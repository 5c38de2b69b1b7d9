"""The full battery of checks behind ``ellmzv verify-all``.

Each check returns a row with a number, a name, ``ok`` and a short detail
string naming the first failing case.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import numeric
from .eisenstein import bernoulli
from .emzv import (compositions, constant_term, derivative_expansion, dim_row,
                   emzv_qexpansion, grlen2_rank, length3_derivative_rank, rhs_series, verify_relations_len2)
from .fayshuffle import fsh_dim, fsh_pol_dim, hilbert_wn, w_dim
from .linind import det_M, double_factorial, verify_binom_identity, verify_LU, verify_rank_C
from .exactcore import TPoly


def _result(num, name, failures, detail_ok="all cases"):
    return {"criterion": num, "name": name, "ok": not failures,
            "detail": detail_ok if not failures else f"first failure: {failures[0]}"}


def check_fay_shuffle_dims():
    bad = [N for N in range(0, 101, 2) if fsh_dim(N) != 0]
    bad += [N for N in range(1, 102, 2) if fsh_dim(N) != N // 3 + 1]
    return _result(1, "Fay-shuffle dimensions", bad, "N <= 101")


def check_w_spaces():
    h = hilbert_wn(60)
    bad = [N for N in range(61) if not (w_dim(N) == (N + 2) // 3 == h[N])]
    bad += [f"pol N={N}" for N in range(3, 42, 2) if w_dim(N - 2) != fsh_pol_dim(N)]
    return _result(2, "W_N dimensions and Hilbert series", bad, "N <= 60")


def check_appendix():
    bad = [n for n in range(1, 31) if det_M(n) != double_factorial(2 * n + 1) or not verify_LU(n)]
    bad += [(a, b) for a in range(61) for b in range(a + 1) if not verify_binom_identity(a, b)]
    return _result(3, "binomial determinant, LU and identity", bad, "n <= 30, a <= 60")


def closed_form_expansion(m: int, n: int) -> dict:
    """The length-two derivative coefficients {(j, k): c} of G_j I(k), from
    the closed formulas; odd j dropped since G_j = 0."""
    out: dict = {}

    def add(c, j, k):
        if c and j % 2 == 0:
            out[(j, k)] = out.get((j, k), 0) + c

    if m == 0 or n == 0:
        n_ = n if m == 0 else m
        sign = 1 if m == 0 else (-1) ** n_
        add(-n_ * sign, n_ + 1, 0)
        add(n_ * sign, 0, n_ + 1)  # G_0 I(n+1)
    else:
        N = m + n
        add(-n, n + 1, m)
        add(m, m + 1, n)
        add(-(-1) ** m * N, N + 1, 0)
        for k in range(1, N + 2):
            add((N - k) * (math.comb(k - 1, m - 1) - math.comb(k - 1, n - 1)), N + 1 - k, k)
    return {key: Fraction(v) for key, v in out.items() if v}


def extracted_expansion(m: int, n: int) -> dict:
    out = {}
    for (j, lower), c in derivative_expansion((m, n)).as_dict().items():
        if c and j % 2 == 0:
            out[(j, lower[0])] = out.get((j, lower[0]), 0) + c
    return {k: v for k, v in out.items() if v}


def _drop_null(exp: dict) -> dict:
    # I(1) and I(2j+1) vanish identically, so their coefficients carry no information
    return {(j, k): c for (j, k), c in exp.items() if not constant_term((k,)).is_zero()}


def derivative_discrepancies(max_weight: int = 30) -> list[tuple]:
    """(m, n, j, k, closed, extracted) wherever the two forms disagree."""
    out = []
    for w in range(max_weight + 1):
        for m in range(w + 1):
            a, b = closed_form_expansion(m, w - m), extracted_expansion(m, w - m)
            for key in sorted(set(a) | set(b)):
                if a.get(key, 0) != b.get(key, 0):
                    out.append((m, w - m) + key + (a.get(key, 0), b.get(key, 0)))
    return out


def check_rank_C():
    bad = [N for N in range(1, 102, 2) if not verify_rank_C(N)]
    bad += [(m, n) for w in range(31) for m, n in ((a, w - a) for a in range(w + 1))
            if _drop_null(closed_form_expansion(m, n)) != _drop_null(extracted_expansion(m, n))]
    # the only raw differences: I(n, 0), n even, coefficient of G_0 I(n+1)
    bad += [d[:2] for d in derivative_discrepancies() if not (d[1] == 0 and d[0] % 2 == 0 and d[2:4] == (0, d[0] + 1))]
    return _result(4, "rank C_N and length-two derivative formulas", bad, "N <= 101, m+n <= 30")


def even_weight_constant(m: int, n: int) -> TPoly:
    """B_m B_n T^{m+n} / (2 m! n!), except I(1,1) = I(1)^2 / 2 = 0."""
    if m == n == 1:
        return TPoly()
    return TPoly.monomial(Fraction(1, 2) * bernoulli(m) * bernoulli(n) / (math.factorial(m) * math.factorial(n)),
                          m + n)


def check_main_theorem():
    bad = [N for N in range(1, 52, 2)
           if not (grlen2_rank(N, N + 20) == grlen2_rank(N, N + 30) == N // 3 + 1)]
    for N in range(0, 41, 2):
        for ix in compositions(N, 2):
            s = emzv_qexpansion(ix, N + 20)
            if not s.qpart.is_zero() or s.constant != even_weight_constant(*ix):
                bad.append(str(ix))
    return _result(5, "length-two ranks and even-weight constants", bad, "odd N <= 51, even N <= 40")


def check_purity():
    bad = [str(ix) for N in range(41) for ix in compositions(N, 2)
           if rhs_series(ix, 8).constant_term()]
    return _result(6, "pure derivative right-hand sides", bad, "weight <= 40")


def check_relations():
    bad = []
    for N in range(31):
        bad += [f"N={N} {f['relation']}({f['m']},{f['n']}) {f['part']}" for f in verify_relations_len2(N).failures()]
    return _result(7, "reflection, shuffle and Fay relations", bad, "N <= 30")


def check_numeric():
    bad = []
    for tau in (1j, 0.5 + 1j):
        for n in (0, 2, 4, 6):
            exact = complex(constant_term((n,)).evaluate(numeric.TWO_PI_I))
            if abs(numeric.iterated_integral_alpha((n,), tau) - exact) >= 1e-8:
                bad.append(f"I({n}) at {tau}")
        for ix in ((0, 3), (2, 3), (0, 5), (2, 2), (3, 3)):
            if not numeric.cross_validate(ix, tau, order=40, tol=1e-6)["ok"]:
                bad.append(f"I{ix} at {tau}")
    return _result(8, "numeric cross-validation", bad, "tau in {i, 1/2+i}")


def path_identities(tau, words=((0, 3), (2, 3), (2, 2, 0), (0, 2, 4)), tol=1e-8):
    """Max residuals of path reversal and composition at the midpoint."""
    tau = numeric.TauPoint(tau)
    rev = comp = 0.0
    for w in words:
        kmax = max(w)
        f = lambda s, n: numeric.f_values(np.asarray(s, dtype=complex), tau, kmax)[n]
        fwd = [lambda s, n=n: f(s, n) for n in w]
        back = [lambda s, n=n: -f(1 - s, n) for n in w]
        whole, _ = numeric.iterated_integral(fwd, 0.0, 1.0, tol / 100)
        reverse, _ = numeric.iterated_integral(back, 0.0, 1.0, tol / 100)
        rev_word, _ = numeric.iterated_integral(fwd[::-1], 0.0, 1.0, tol / 100)
        rev = max(rev, abs(reverse[-1] - (-1) ** len(w) * rev_word[-1]))
        left, _ = numeric.iterated_integral(fwd, 0.0, 0.5, tol / 100)
        r = len(w)
        total = 0
        for k in range(r + 1):
            tail = numeric.iterated_integral(fwd[k:], 0.5, 1.0, tol / 100)[0][-1] if k < r else 1.0
            total += left[k] * tail
        comp = max(comp, abs(total - whole[-1]))
    return {"reversal": rev, "composition": comp}


def check_pointwise():
    bad = []
    for tau in (1j, (1 + 3j) / 2):
        rep = numeric.check_properties(tau, samples=20, kmax=8, tol=1e-8)
        bad += [f"{k} at {tau}" for k, v in rep["residuals"].items() if not v < 1e-8]
        bad += [f"{k} at {tau}" for k, v in path_identities(tau).items() if not v < 1e-8]
    return _result(9, "pointwise identities of f^(k) and path identities", bad, "tau in {i, (1+3i)/2}")


def check_length3():
    bad = [N for N in range(14) if length3_derivative_rank(N, N + 20) != length3_derivative_rank(N, N + 30)]
    return _result(10, "length-three rank stability", bad, "N <= 13 (table values reported only)")


CHECKS = (check_fay_shuffle_dims, check_w_spaces, check_appendix, check_rank_C, check_main_theorem,
          check_purity, check_relations, check_numeric, check_pointwise, check_length3)


def length3_report(max_weight: int = 13) -> list[dict]:
    return [dim_row(N, length3=True) for N in range(max_weight + 1)]


def run_all() -> list[dict]:
    return [check() for check in CHECKS]

