import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcurrent.qfield import ONE, Q, ZERO, QRat, qpow
from qcurrent.series import (KernelSpec, SeriesError, TruncatedSeries, delta_difference,
                             expand_kernel, g_kernel, is_delta_multiple, minus_exchange_kernel,
                             plus_exchange_kernel, linear_factor, series_compare, series_exp,
                             series_log)


def test_geometric_kernel():
    # 1/(1 - q^2 x) = sum q^(2n) x^n
    s = expand_kernel(KernelSpec("x", (), (linear_factor(1, 2),)), 6)
    assert all(s[n] == qpow(2 * n) for n in range(7))


def test_condition_kernels():
    # (1 - q^2 x)/(1 - x) = 1 + (1 - q^2)(x + x^2 + ...)
    k = minus_exchange_kernel(8)
    assert k[0] == ONE and all(k[n] == ONE - Q * Q for n in range(1, 9))
    # (1 - y)/(1 - q^2 y): coefficient q^(2n) - q^(2n-2)
    kp = plus_exchange_kernel(8)
    assert all(kp[n] == qpow(2 * n) - qpow(2 * n - 2) for n in range(1, 9))


def test_exp_of_linear_term():
    s = series_exp(TruncatedSeries("x", {1: ONE}, 0, 6))
    fact = 1
    for n in range(7):
        assert s[n] == QRat(1, fact)
        fact *= n + 1


def test_log_one_minus_x():
    s = series_log(TruncatedSeries("x", {0: ONE, 1: -ONE}, 0, 8))
    assert all(s[n] == QRat(-1, n) for n in range(1, 9))


def test_log_requires_unit_constant():
    with pytest.raises(SeriesError):
        series_log(TruncatedSeries("x", {0: QRat(2)}, 0, 3))


def test_truncation_bookkeeping():
    a = TruncatedSeries("x", {0: ONE, 1: ONE}, 0, 3)
    b = TruncatedSeries("x", {0: ONE}, 0, 5)
    assert (a * b).hi == 3
    with pytest.raises(SeriesError):
        a[4]
    with pytest.raises(SeriesError):
        a + TruncatedSeries("y", {}, 0, 3)


def test_compare_reports_first_mismatch():
    a = TruncatedSeries("x", {0: ONE, 2: ONE}, 0, 4)
    b = TruncatedSeries("x", {0: ONE}, 0, 4)
    r = series_compare(a, b)
    assert not r and r.exponent == 2


def test_g_kernel_difference_is_delta():
    # g(z) = (q^2 z - 1)/(z - q^2) expanded at 0 and at infinity differs by C*delta(z/q^2)
    num, den = g_kernel(2)
    diff = delta_difference(num, den, 6)
    assert is_delta_multiple(diff, qpow(2))
    assert not is_delta_multiple(diff, qpow(4))


coeffs = st.lists(st.integers(-3, 3), min_size=1, max_size=8)


@settings(max_examples=60, deadline=None)
@given(coeffs)
def test_exp_log_round_trip(cs):
    s = TruncatedSeries("x", {n + 1: QRat(c) * qpow(n) for n, c in enumerate(cs)}, 0, len(cs))
    back = series_log(series_exp(s))
    assert series_compare(back, s)


@settings(max_examples=60, deadline=None)
@given(coeffs, coeffs)
def test_exp_is_multiplicative(a, b):
    N = 6
    sa = TruncatedSeries("x", {n + 1: QRat(c) for n, c in enumerate(a) if n < N}, 0, N)
    sb = TruncatedSeries("x", {n + 1: QRat(c) for n, c in enumerate(b) if n < N}, 0, N)
    assert series_compare(series_exp(sa + sb), series_exp(sa) * series_exp(sb))
