import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcurrent.heisenberg import (MINUS, PLUS, PRINTED, STANDARD, HeisenbergError, LevelContext,
                                 a_from_phi, bracket_aa, compare_kernels, dressing_coeffs,
                                 gamma_plus, phi_from_a, printed_dressing_coeff, verify_condition)
from qcurrent.ideal_lab import CommPoly
from qcurrent.qfield import ONE, Q, ZERO, QRat, parse, qpow
from qcurrent.series import TruncatedSeries

STD1 = LevelContext(1)
PRN1 = LevelContext(1, PRINTED)


def test_bracket_values():
    assert bracket_aa(1, 2, STD1) == ZERO
    assert bracket_aa(1, -1, STD1) == Q + qpow(-1)
    assert bracket_aa(-1, 1, STD1) == -(Q + qpow(-1))
    with pytest.raises(HeisenbergError):
        bracket_aa(0, 0, STD1)


def test_bracket_regular_at_q_one():
    qq2 = (Q - qpow(-1)) ** 2
    for c in (1, 2, 3):
        for k in range(1, 6):
            (bracket_aa(k, -k, LevelContext(c)) * qq2).at_one()


def test_gamma_conventions():
    assert gamma_plus(1, STD1) == (Q + qpow(-1)) * qpow(Fraction(-1, 2))
    assert gamma_plus(1, PRN1) == gamma_plus(1, STD1)
    assert gamma_plus(2, STD1) / gamma_plus(2, PRN1) == qpow(Fraction(-1, 2))


def test_standard_dressing_order_one():
    c1 = dressing_coeffs(MINUS, 1, STD1)[0]
    assert c1 * gamma_plus(1, STD1) == ONE - Q * Q
    assert dressing_coeffs(MINUS, 0, STD1) == []


def test_printed_dressing_coefficient():
    # exponent read as 2n + c/2, which agrees with the standard coefficient at n = 1
    expected = -(Q - qpow(-1)) * qpow(Fraction(5, 2)) / (ONE + Q * Q)
    assert printed_dressing_coeff(MINUS, 1, 1) == expected
    assert dressing_coeffs(MINUS, 1, PRN1)[0] == dressing_coeffs(MINUS, 1, STD1)[0]


@pytest.mark.parametrize("c", [1, 2, 3])
@pytest.mark.parametrize("sign", [MINUS, PLUS])
def test_standard_condition_holds(c, sign):
    rep = verify_condition(sign, 20, LevelContext(c))
    assert rep.passed and rep.first_mismatch is None
    assert verify_condition(sign, 0, LevelContext(c)).passed


@pytest.mark.parametrize("c", [1, 2, 3])
def test_printed_condition_ratio(c):
    rep = verify_condition(MINUS, 6, LevelContext(c, PRINTED))
    assert rep.first_mismatch == 2
    ratios = rep.log_ratios()
    for n in range(1, 7):
        assert ratios[n] == qpow(Fraction(-(n - 1) * c, 2))


def test_extract_formal_symbol():
    a1 = CommPoly.var(1)
    phi = phi_from_a([a1, CommPoly(), CommPoly()], CommPoly.const(ONE), zero=CommPoly())
    phi0, modes = a_from_phi(phi)
    assert phi0 == ONE and modes[0] == a1 and not modes[1] and not modes[2]


def test_extract_rejects_zero_constant():
    with pytest.raises(HeisenbergError):
        a_from_phi(TruncatedSeries("z", {1: ONE}, 0, 3))


def test_series_round_trip_degree6():
    rng = random.Random(7)
    for _ in range(20):
        s = TruncatedSeries("z", {0: ONE, **{n: QRat(rng.randint(-3, 3)) * qpow(rng.randint(-2, 2))
                                             for n in range(1, 7)}}, 0, 6)
        phi0, modes = a_from_phi(s)
        back = phi_from_a(modes, phi0)
        assert all(back[n] == s[n] for n in range(7))


laurent = st.dictionaries(st.integers(-6, 6), st.integers(-4, 4), max_size=3)


@settings(max_examples=40, deadline=None)
@given(st.lists(laurent, min_size=12, max_size=12), st.integers(-4, 4))
def test_mode_round_trip(modes, e):
    a = [QRat.from_laurent(m) for m in modes]
    phi0 = qpow(e) * 3
    got0, got = a_from_phi(phi_from_a(a, phi0))
    assert got0 == phi0 and got == a


@pytest.mark.parametrize("c", [1, 2])
def test_mixed_kernels(c):
    rep = compare_kernels(6, c)
    assert rep["phi_xbar_derived"] and rep["xminus_derived"]
    assert not rep["phi_xbar_printed"] and not rep["xminus_printed"]
