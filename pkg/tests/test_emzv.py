import math
from fractions import Fraction

import pytest

from ellmzv.eisenstein import bernoulli, eisenstein_q
from ellmzv.emzv import (D_LOW_3, MultiIndex, binom_ext, binom_std, compositions, constant_term, default_order,
                         derivative_expansion, dim_row, dim_table, emzv_length1, emzv_qexpansion, exponent_window,
                         grlen2_rank, grlen2_value_rank, length3_derivative_rank, rhs_series, verify_relations_len2)
from ellmzv.errors import EvenWeight, UnknownConstant, UnsupportedLength
from ellmzv.exactcore import QSeries, TPoly


def sigma(k, n):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def test_multi_index():
    ix = MultiIndex.parse("0,3")
    assert ix.entries == (0, 3) and ix.weight == 3 and ix.length == 2
    assert str(ix) == "(0,3)"
    assert MultiIndex.parse("(2,2)") == MultiIndex((2, 2))
    with pytest.raises(ValueError):
        MultiIndex((1, -1))


def test_compositions_count():
    for N in range(8):
        for r in (1, 2, 3):
            assert len(compositions(N, r)) == math.comb(N + r - 1, r - 1)


def test_binomials():
    assert binom_std(-1, -1) == 0
    assert binom_ext(-1, -1) == 1
    assert binom_std(5, 2) == binom_ext(5, 2) == 10


def test_length_one_constants():
    assert constant_term((1,)).is_zero()
    for n in (0, 2, 4, 3):
        assert constant_term((n,)) == TPoly.monomial(bernoulli(n) / math.factorial(n), n)
    s = emzv_length1(4, order=5)
    assert s.qpart.is_zero()


def test_length_two_constants():
    assert constant_term((1, 1)).is_zero()
    assert constant_term((2, 1)) == TPoly.monomial(-Fraction(1, 2) * bernoulli(2) * bernoulli(1) / 2, 3)
    assert constant_term((0, 2)) == TPoly.monomial(Fraction(1, 24), 2)
    with pytest.raises(UnsupportedLength):
        constant_term((0, 0, 0))


def test_known_expansion_03():
    s = emzv_qexpansion((0, 3), 3)
    assert s.constant.is_zero()
    assert [s.qpart[n] for n in (1, 2, 3)] == [TPoly.monomial(c, 2) for c in (-1, Fraction(-9, 2), Fraction(-28, 3))]


def test_expansion_03_closed_form():
    # 2 pi i d/dtau I(0,3) = -3 G_4 I(0) + 3 G_0 I(4) has q-part -3 * 2T^4/3! sigma_3(n) q^n,
    # so the q^n coefficient of I(0,3) is -T^2 sigma_3(n) / n
    s = emzv_qexpansion((0, 3), 12)
    for n in range(1, 13):
        assert s.qpart[n] == TPoly.monomial(Fraction(-sigma(3, n), n), 2)


def test_derivative_matches_rhs():
    # forward check: 2 pi i d/dtau (q-part) == rhs q-part
    for ix in [(0, 3), (1, 2), (2, 3), (0, 0, 3), (1, 0, 2)]:
        M = 10
        s = emzv_qexpansion(ix, M)
        lhs = s.qpart.derivative_tau()
        assert lhs == rhs_series(ix, M).qpart()


def test_rhs_is_assembled_from_expansion():
    ix = (2, 3)
    M = 6
    acc = QSeries.zero(M)
    for c, j, lower in derivative_expansion(ix).terms:
        low = emzv_qexpansion(lower, M)
        acc = acc + eisenstein_q(j, M).series * low.full().scale(c)
    assert acc == rhs_series(ix, M)


def test_length_three_constant_unknown():
    s = emzv_qexpansion((0, 0, 3), 4)
    assert not s.constant_known
    with pytest.raises(UnknownConstant):
        s.full()
    with pytest.raises(UnsupportedLength):
        emzv_qexpansion((0, 0, 0, 3), 4)


def test_exponent_window():
    assert list(exponent_window(5, 2)) == [3, 4, 5]
    for ix in compositions(5, 2):
        assert set(emzv_qexpansion(ix, 8).qpart.exponents()) <= set(exponent_window(5, 2))


def test_grlen2_ranks():
    assert [grlen2_rank(N) for N in (1, 3, 5, 7, 9, 11)] == [1, 2, 2, 3, 4, 4]
    assert grlen2_value_rank(6) == 0
    with pytest.raises(EvenWeight):
        grlen2_rank(4)


def test_relations_hold_to_weight_10():
    for N in range(11):
        rep = verify_relations_len2(N)
        assert rep.ok, rep.failures()


def test_fay_boundary_constant_reported():
    rep = verify_relations_len2(2)
    e = [e for e in rep.entries if e["relation"] == "fay" and (e["m"], e["n"]) == (1, 1) and e["part"] == "constant"]
    assert e and not e[0]["asserted"]


def test_dim_table():
    rows = dim_table(9)
    assert [r["D2"] for r in rows] == [0, 1, 0, 2, 0, 2, 0, 3, 0, 4]
    assert [r["D1"] for r in rows] == [0, 0, 1, 0, 1, 0, 1, 0, 1, 0]
    assert all(r["ok"] and r["provenance"] == "theorem" for r in rows)
    r2 = dim_row(2, length3=True)
    assert r2["D3_reference"] == D_LOW_3[2] and r2["D3_provenance"] == "paper-table"


def test_length3_small():
    assert [length3_derivative_rank(N) for N in range(5)] == [0, 1, 2, 2, 3]
    assert default_order(7) == 27
