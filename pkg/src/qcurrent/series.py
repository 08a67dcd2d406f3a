"""Truncated Laurent series in a single ratio variable.

A :class:`TruncatedSeries` knows its coefficients exactly on the window
``lo..hi``; nothing lives below ``lo`` and everything above ``hi`` is
unknown.  Coefficients are QRat by default but any commutative ring
element supporting ``+ - *`` and scaling by QRat works (see
:class:`qcurrent.ideal_lab.CommPoly`), which is what the Heisenberg mode
extraction uses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .qfield import ONE, ZERO, QRat, qpow, qrat

ABOUT_ZERO = "about 0"
ABOUT_INF = "about inf"


class SeriesError(ValueError):
    pass


def _is_zero(c):
    return not c


@dataclass(frozen=True)
class TruncatedSeries:
    var: str
    coeffs: dict
    lo: int
    hi: int
    direction: str = ABOUT_ZERO
    zero: object = field(default=ZERO, compare=False, repr=False)

    def __post_init__(self):
        if self.hi < self.lo - 1:
            raise SeriesError(f"empty window {self.lo}..{self.hi}")
        bad = [e for e in self.coeffs if not self.lo <= e <= self.hi]
        if bad:
            raise SeriesError(f"exponents {bad} outside window {self.lo}..{self.hi}")
        clean = {e: c for e, c in self.coeffs.items() if not _is_zero(c)}
        object.__setattr__(self, "coeffs", clean)

    # -- construction --------------------------------------------------------
    @classmethod
    def constant(cls, value, var="x", order=0, zero=ZERO):
        return cls(var, {0: value}, 0, order, zero=zero)

    @classmethod
    def from_list(cls, values, var="x", lo=0, zero=ZERO):
        return cls(var, {lo + i: v for i, v in enumerate(values)}, lo,
                   lo + len(values) - 1, zero=zero)

    def __getitem__(self, e):
        if e > self.hi:
            raise SeriesError(f"coefficient {e} beyond truncation order {self.hi}")
        return self.coeffs.get(e, self.zero)

    def _like(self, coeffs, lo, hi):
        return TruncatedSeries(self.var, coeffs, lo, hi, self.direction, self.zero)

    def _check(self, other):
        if self.var != other.var or self.direction != other.direction:
            raise SeriesError(
                f"incompatible series: {self.var!r}/{self.direction} vs "
                f"{other.var!r}/{other.direction}")

    def truncate(self, hi):
        hi = min(hi, self.hi)
        return self._like({e: c for e, c in self.coeffs.items() if e <= hi}, self.lo, hi)

    # -- ring operations -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            out = dict(self.coeffs)
            out[0] = out[0] + other if 0 in out else other
            return self._like(out, min(self.lo, 0), self.hi)
        self._check(other)
        lo, hi = min(self.lo, other.lo), min(self.hi, other.hi)
        out = {}
        for e in set(self.coeffs) | set(other.coeffs):
            if e <= hi:
                out[e] = self[e] + other[e]
        return self._like(out, lo, hi)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.coeffs.items()}, self.lo, self.hi)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        return self._like({e: c * s for e, c in self.coeffs.items()}, self.lo, self.hi)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        lo = self.lo + other.lo
        hi = min(self.hi + other.lo, other.hi + self.lo)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e <= hi:
                    out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return self._like(out, lo, hi)

    def __rmul__(self, other):
        return self.scale(other)

    def shift(self, k):
        """Multiply by var**k."""
        return self._like({e + k: c for e, c in self.coeffs.items()}, self.lo + k, self.hi + k)

    def substitute_scale(self, s):
        """x -> s*x with s a QRat."""
        out = {}
        for e, c in self.coeffs.items():
            out[e] = c * (s ** e)
        return self._like(out, self.lo, self.hi)

    def is_zero(self):
        return not self.coeffs

    def to_json(self):
        return json.dumps({str(e): str(c) for e, c in sorted(self.coeffs.items())}, sort_keys=False)

    def __str__(self):
        if not self.coeffs:
            return f"0 + O({self.var}^{self.hi + 1})"
        terms = [f"({c})*{self.var}^{e}" for e, c in sorted(self.coeffs.items())]
        return " + ".join(terms) + f" + O({self.var}^{self.hi + 1})"


# -- exp / log -----------------------------------------------------------------

def _inv_int(m):
    return QRat(1, m)


def series_exp(s):
    """exp of a series with vanishing constant term, to the same order."""
    if any(e < 0 for e in s.coeffs):
        raise SeriesError("exp needs a power series")
    if not _is_zero(s.coeffs.get(0, s.zero)):
        raise SeriesError("series_exp: constant term must be 0")
    N = s.hi
    one = _one_like(s)
    p = [one]
    # m p_m = sum_{j=1..m} j s_j p_{m-j}
    for m in range(1, N + 1):
        acc = s.zero
        for j in range(1, m + 1):
            sj = s.coeffs.get(j)
            if sj is None:
                continue
            term = sj * p[m - j]
            acc = acc + (term * QRat(j) if j != 1 else term)
        p.append(acc * _inv_int(m))
    return s._like(dict(enumerate(p)), 0, N)


def series_log(s):
    """log of a series with constant term 1 (Mercator series of s - 1)."""
    if any(e < 0 for e in s.coeffs) or s.lo > 0:
        raise SeriesError("log needs a power series with constant term 1")
    c0 = s[0]
    one = _one_like(s)
    if c0 != one:
        raise SeriesError(f"series_log: constant term must be 1, got {c0}")
    N = s.hi
    out = [s.zero]
    # m L_m = m s_m - sum_{j=1..m-1} j L_j s_{m-j}
    for m in range(1, N + 1):
        acc = s[m] * QRat(m)
        for j in range(1, m):
            sm = s.coeffs.get(m - j)
            if sm is None or _is_zero(out[j]):
                continue
            acc = acc - out[j] * sm * QRat(j)
        out.append(acc * _inv_int(m))
    return s._like(dict(enumerate(out)), 0, N)


def _one_like(s):
    z = s.zero
    if isinstance(z, QRat):
        return ONE
    return z.one()


# -- kernels -------------------------------------------------------------------

@dataclass(frozen=True)
class KernelSpec:
    """A rational kernel  prefactor * prod(num) / prod(den)  in a ratio variable.

    Each factor is a pair ``(a, b)`` of QRat meaning ``a + b*x``; build the
    common ``(1 - s*q^m*x)`` shape with :func:`linear_factor`.
    """

    var: str
    num: tuple
    den: tuple
    prefactor: QRat = ONE
    direction: str = ABOUT_ZERO

    def __mul__(self, other):
        if self.var != other.var or self.direction != other.direction:
            raise SeriesError("kernels expanded in different variables")
        return KernelSpec(self.var, self.num + other.num, self.den + other.den,
                          self.prefactor * other.prefactor, self.direction)


def linear_factor(scalar=1, shift=0, const=1):
    """The factor ``const - scalar * q**shift * x`` as an (a, b) pair."""
    return (qrat(const), -qrat(scalar) * qpow(shift))


def expand_kernel(k, N):
    """Expand ``k`` as a power series in its variable through x**N."""
    out = TruncatedSeries(k.var, {0: k.prefactor}, 0, N, k.direction)
    for a, b in k.num:
        out = out * TruncatedSeries(k.var, {0: a, 1: b} if N >= 1 else {0: a}, 0, N, k.direction)
    for a, b in k.den:
        if a.is_zero():
            raise SeriesError(f"kernel has a pole at {k.var}=0")
        # 1/(a + b x) = (1/a) * sum (-b/a)^n x^n
        r = -b / a
        inv_a = a.inverse()
        geo, p = {}, inv_a
        for n in range(N + 1):
            geo[n] = p
            p = p * r
        out = out * TruncatedSeries(k.var, geo, 0, N, k.direction)
    return out


def minus_exchange_kernel(N, var="w/z"):
    """(z - w q^2)/(z - w) expanded in x = w/z."""
    return expand_kernel(KernelSpec(var, (linear_factor(1, 2),), (linear_factor(1, 0),)), N)


def plus_exchange_kernel(N, var="z/w"):
    """(z - w)/(z q^2 - w) expanded in y = z/w, i.e. (1 - y)/(1 - q^2 y)."""
    return expand_kernel(KernelSpec(var, (linear_factor(1, 0),), (linear_factor(1, 2),)), N)


# -- comparison ----------------------------------------------------------------

@dataclass
class CompareReport:
    equal: bool
    lo: int
    hi: int
    exponent: int = None
    lhs: object = None
    rhs: object = None

    def __bool__(self):
        return self.equal

    def __str__(self):
        if self.equal:
            return f"equal on {self.lo}..{self.hi}"
        return f"mismatch at exponent {self.exponent}: {self.lhs} != {self.rhs}"


def series_compare(a, b):
    """Compare two series on their common window."""
    if a.var != b.var or a.direction != b.direction:
        raise SeriesError("series_compare: incompatible variables or directions")
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo > hi:
        raise SeriesError(f"series_compare: disjoint windows {a.lo}..{a.hi} and {b.lo}..{b.hi}")
    for e in range(lo, hi + 1):
        x, y = a.coeffs.get(e, a.zero), b.coeffs.get(e, b.zero)
        if x != y:
            return CompareReport(False, lo, hi, e, x, y)
    return CompareReport(True, lo, hi)


# -- two-sided expansions ------------------------------------------------------

def g_kernel(a_ij=2):
    """g(z) = (q^a z - 1)/(z - q^a) in the variable z."""
    return (-ONE, qpow(a_ij)), (-qpow(a_ij), ONE)


def two_sided_expansions(num, den, N):
    """Expand (n0 + n1 z)/(d0 + d1 z) about z=0 and about z=inf.

    Returns two dicts ``{exponent of z: coefficient}``: the first holds
    exponents 0..N, the second exponents -N..0.
    """
    n0, n1 = num
    d0, d1 = den
    var = "z"
    at0 = expand_kernel(KernelSpec(var, ((n0, n1),), ((d0, d1),)), N)
    # about inf: divide through by z and expand in y = 1/z
    #   (n1 + n0 y)/(d1 + d0 y)
    atinf = expand_kernel(KernelSpec("1/z", ((n1, n0),), ((d1, d0),)), N)
    return ({e: at0[e] for e in range(N + 1)}, {-e: atinf[e] for e in range(N + 1)})


def delta_difference(num, den, N):
    """Coefficients on -N..N of (expansion about 0) - (expansion about inf)."""
    at0, atinf = two_sided_expansions(num, den, N)
    return {e: at0.get(e, ZERO) - atinf.get(e, ZERO) for e in range(-N, N + 1)}


def is_delta_multiple(diff, point):
    """True if diff[e] = C * point^(-e) for a single C, i.e. C * delta(z/point)."""
    c0 = diff.get(0, ZERO)
    if not c0:
        return False
    return all(c == c0 * point ** (-e) for e, c in diff.items())
