"""Heisenberg modes of U_q(sl2^): structure constants and dressing kernels.

Two conventions are carried side by side:

``standard``
    [a_k, x^+(l)] = [2k]/k * q^(-|k|c/2) x^+(k+l) and
    [a_k, a_l] = delta_{k+l,0} [2k][kc]/k.
``printed``
    the constants exactly as displayed in the source text, with
    q^(-|c|/2) (no k-dependence) and [2k][c]/k.

The dressing coefficients of k^-(z), k^+(z) are always *derived* from the
exchange conditions using the chosen convention's constants, and then the
exchange multiplier is checked against the standard constants, which are
the ones the algebra actually satisfies (see :func:`verify_condition`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .qfield import ONE, ZERO, Q, QRat, qint, qpow
from .series import (
    TruncatedSeries,
    minus_exchange_kernel,
    plus_exchange_kernel,
    series_compare,
    series_exp,
    series_log,
    expand_kernel,
    KernelSpec,
    linear_factor,
)

STANDARD = "standard"
PRINTED = "printed"
CONVENTIONS = (STANDARD, PRINTED)

MINUS = "minus"
PLUS = "plus"

_QQ = Q - qpow(-1)  # q - q^-1


class HeisenbergError(ValueError):
    pass


@dataclass(frozen=True)
class LevelContext:
    c: int = 1
    convention: str = STANDARD

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise HeisenbergError(f"unknown convention {self.convention!r}")

    def with_convention(self, convention):
        return LevelContext(self.c, convention)


def _check_mode(k):
    if k == 0:
        raise HeisenbergError("zero mode a_0 is handled separately")


@lru_cache(maxsize=None)
def bracket_aa(k, l, ctx=LevelContext()):
    """[a_k, a_l] as a QRat."""
    _check_mode(k)
    _check_mode(l)
    if k + l != 0:
        return ZERO
    two_k = (qpow(2 * k) - qpow(-2 * k)) / _QQ
    if ctx.convention == PRINTED:
        return two_k * qint(ctx.c) / QRat(k)
    return two_k * qint(k * ctx.c) / QRat(k)


@lru_cache(maxsize=None)
def gamma_plus(k, ctx=LevelContext()):
    """Coefficient in [a_k, x^+(l)] = gamma_plus(k) x^+(k+l)."""
    _check_mode(k)
    shift = abs(ctx.c) if ctx.convention == PRINTED else abs(k) * ctx.c
    return (qpow(2 * k) - qpow(-2 * k)) * qpow(Fraction(-shift, 2)) / (QRat(k) * _QQ)


@lru_cache(maxsize=None)
def gamma_minus(k, ctx=LevelContext()):
    """Coefficient in [a_k, x^-(l)] = -gamma_minus(k) x^-(k+l)."""
    _check_mode(k)
    shift = abs(ctx.c) if ctx.convention == PRINTED else abs(k) * ctx.c
    return (qpow(2 * k) - qpow(-2 * k)) * qpow(Fraction(shift, 2)) / (QRat(k) * _QQ)


@dataclass(frozen=True)
class DressingKernel:
    """log k^-(z) = sum_n coeffs[n-1] a_n z^-n ;  log k^+(z) = sum_n coeffs[n-1] a_-n z^n."""

    sign: str
    coeffs: tuple
    ctx: LevelContext = field(default_factory=LevelContext)


@lru_cache(maxsize=None)
def _dressing(sign, N, ctx):
    out = []
    for n in range(1, N + 1):
        if sign == MINUS:
            # c_n * gamma_n = (1 - q^{2n})/n   from (z - wq^2)/(z - w)
            out.append((ONE - qpow(2 * n)) / (QRat(n) * gamma_plus(n, ctx)))
        elif sign == PLUS:
            # d_n * gamma_{-n} = (q^{2n} - 1)/n   from (z - w)/(zq^2 - w)
            out.append((qpow(2 * n) - ONE) / (QRat(n) * gamma_plus(-n, ctx)))
        else:
            raise HeisenbergError(f"sign must be {MINUS!r} or {PLUS!r}")
    return tuple(out)


def dressing_coeffs(sign, N, ctx=LevelContext()):
    """Coefficients c_1..c_N of log k^-(z) (sign='minus') or log k^+(z) (sign='plus')."""
    return list(_dressing(sign, N, ctx))


def dressing_kernel(sign, N, ctx=LevelContext()):
    return DressingKernel(sign, _dressing(sign, N, ctx), ctx)


def printed_dressing_coeff(sign, n, c):
    """-/+ (q - q^-1) q^(2n + c/2) / (1 + q^(2n)) : the displayed k^-(z), k^+(z) exponent."""
    val = _QQ * qpow(2 * n + Fraction(c, 2)) / (ONE + qpow(2 * n))
    return -val if sign == MINUS else val


@dataclass
class ConditionRow:
    order: int
    multiplier: QRat
    kernel: QRat

    @property
    def ok(self):
        return self.multiplier == self.kernel


@dataclass
class ConditionReport:
    sign: str
    ctx: LevelContext
    rows: list
    ratios: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.ok for r in self.rows)

    @property
    def first_mismatch(self):
        for r in self.rows:
            if not r.ok:
                return r.order
        return None

    def log_ratios(self):
        """Per-order ratio of the dressing log-coefficient to the one the kernel needs."""
        return dict(self.ratios)

    def tsv(self):
        lines = ["order\tmultiplier\tkernel\tstatus"]
        for r in self.rows:
            lines.append(f"{r.order}\t{r.multiplier}\t{r.kernel}\t{'ok' if r.ok else 'MISMATCH'}")
        return "\n".join(lines)


def verify_condition(sign, N, ctx=LevelContext()):
    """Check that k^-(z) (or k^+(z)) conjugates x^+(w) by the exchange kernel.

    The dressing is derived in ``ctx.convention``; conjugating x^+(w) by it
    multiplies x^+(w) by exp(sum_n c_n gamma_n x^n) where gamma_n are the
    standard structure constants.  This is compared order by order with the
    kernel expansion.
    """
    coeffs = dressing_coeffs(sign, N, ctx) if N >= 1 else []
    true_ctx = ctx.with_convention(STANDARD)
    if sign == MINUS:
        var, kernel = "w/z", minus_exchange_kernel(N)
        gammas = [gamma_plus(n, true_ctx) for n in range(1, N + 1)]
    else:
        var, kernel = "z/w", plus_exchange_kernel(N)
        gammas = [gamma_plus(-n, true_ctx) for n in range(1, N + 1)]
    log_mult = TruncatedSeries(var, {n: coeffs[n - 1] * gammas[n - 1] for n in range(1, N + 1)}, 0, N)
    mult = series_exp(log_mult)
    log_kernel = series_log(kernel)
    rows = [ConditionRow(n, mult[n], kernel[n]) for n in range(N + 1)]
    ratios = {n: log_mult[n] / log_kernel[n] for n in range(1, N + 1) if log_kernel[n]}
    return ConditionReport(sign, ctx, rows, ratios)


@lru_cache(maxsize=None)
def gamma_bar(k, ctx=LevelContext()):
    """Coefficient in [a_k, xbar_m] = gamma_bar(k) xbar_{m+k} for xbar(z) = x^+(z) k^-(z)."""
    _check_mode(k)
    g = gamma_plus(k, ctx)
    if k > 0:
        return g
    c_n = dressing_coeffs(MINUS, -k, ctx)[-1]
    return g + c_n * bracket_aa(k, -k, ctx)


# -- extraction of a_k from phi ----------------------------------------------------

def a_from_phi(phi, N=None):
    """Extract a_{-1}..a_{-N} from phi(z) = phi(0) exp(-(q - q^-1) sum_k a_{-k} z^k).

    Returns ``(phi0, [a_-1, ..., a_-N])``.  Coefficients may be QRat or
    commuting polynomial symbols.
    """
    N = phi.hi if N is None else min(N, phi.hi)
    phi0 = phi.coeffs.get(0)
    if phi0 is None or not phi0:
        raise HeisenbergError("phi(0) must be invertible (nonzero constant term)")
    if not isinstance(phi0, QRat):
        if not phi0.is_constant():
            raise HeisenbergError("phi(0) must be a scalar")
        phi0 = phi0.constant_term()
    normalized = phi.truncate(N).scale(phi0.inverse())
    log = series_log(normalized)
    scale = -_QQ.inverse()
    return phi0, [log[k] * scale for k in range(1, N + 1)]


def phi_from_a(a_modes, phi0=ONE, var="z", zero=ZERO):
    """Inverse of :func:`a_from_phi`: phi(z) through z^len(a_modes)."""
    N = len(a_modes)
    s = TruncatedSeries(var, {k: a_modes[k - 1] * (-_QQ) for k in range(1, N + 1)}, 0, N, zero=zero)
    return series_exp(s).scale(phi0)


# -- phi / xbar and xbar / x^- kernels ---------------------------------------------

def phi_xbar_multiplier(N, ctx=LevelContext(c=1)):
    """Series in x = z/w of the scalar M with phi(z) xbar(w) phi(z)^-1 = M xbar(w).

    Uses phi(0) xbar phi(0)^-1 = q^-2 xbar and [a_-k, xbar(w)] = gamma_bar(-k) w^-k xbar(w).
    """
    log = TruncatedSeries("z/w", {k: -_QQ * gamma_bar(-k, ctx) for k in range(1, N + 1)}, 0, N)
    return series_exp(log).scale(qpow(-2))


def g_of_shifted(N, c, power=1):
    """g(x q^{-c/2})^{power} in x, with g(z) = (q^2 z - 1)/(z - q^2) about z=0."""
    s = qpow(Fraction(-c, 2))
    num = ((-ONE, qpow(2) * s),)
    den = ((-qpow(2), s),)
    if power == -1:
        num, den = den, num
    return expand_kernel(KernelSpec("z/w", num, den), N)


def derived_f1(N, c):
    """f1 such that the phi-xbar multiplier equals f1(x) g(x q^{-c/2}) (standard constants)."""
    h = Fraction(c, 2)
    num = (linear_factor(1, 2 + 3 * h), linear_factor(1, -h))
    den = (linear_factor(1, 2 - h), linear_factor(1, 3 * h))
    return expand_kernel(KernelSpec("z/w", num, den), N)


def printed_f1(N, c):
    """f1 as displayed: ((1 - x q^2 q^{c/2})(1 - x q^{c/2}) / ((1 - x q^2 q^{3c/2})(1 - x q^{3c/2})))^-1."""
    h = Fraction(c, 2)
    num = (linear_factor(1, 2 + 3 * h), linear_factor(1, 3 * h))
    den = (linear_factor(1, 2 + h), linear_factor(1, h))
    return expand_kernel(KernelSpec("z/w", num, den), N)


def xminus_dressing_multiplier(N, ctx=LevelContext(c=1)):
    """Series in x = w/z of the scalar with k^-(z) x^-(w) k^-(z)^-1 = M x^-(w)."""
    coeffs = dressing_coeffs(MINUS, N, ctx)
    true_ctx = ctx.with_convention(STANDARD)
    log = TruncatedSeries("w/z", {n: -coeffs[n - 1] * gamma_minus(n, true_ctx) for n in range(1, N + 1)}, 0, N)
    return series_exp(log)


def derived_f2(N, c):
    """f2 = 1/M for the x^- multiplier: (1 - q^{2+c} x)/(1 - q^c x)."""
    return expand_kernel(KernelSpec("w/z", (linear_factor(1, 2 + c),), (linear_factor(1, c),)), N)


def printed_f2(N, c):
    """f2 as displayed: (q^2 q^c x - 1)(x q^c - 1)."""
    return expand_kernel(KernelSpec("w/z", ((-ONE, qpow(2 + c)), (-ONE, qpow(c))), ()), N)


def compare_kernels(N=6, c=1):
    """Reports for the mixed phi-xbar and xbar-x^- kernels against printed f1, f2."""
    ctx = LevelContext(c)
    mult = phi_xbar_multiplier(N, ctx)
    g = g_of_shifted(N, c)
    out = {
        "phi_xbar_derived": series_compare(mult, derived_f1(N, c) * g),
        "phi_xbar_printed": series_compare(mult, printed_f1(N, c) * g),
    }
    m = xminus_dressing_multiplier(N, ctx)
    one = TruncatedSeries("w/z", {0: ONE}, 0, N)
    out["xminus_derived"] = series_compare(m * derived_f2(N, c), one)
    out["xminus_printed"] = series_compare(m * printed_f2(N, c), one)
    return out
