"""Exact arithmetic in the field Q(q^(1/2)).

Elements are a power of the formal square root ``u = q^(1/2)`` times a
reduced fraction of integer polynomials in u, so ``q = u**2`` and powers of
q of either sign are cheap.  Polynomial gcds are delegated to FLINT
(``python-flint``); high-precision evaluation uses mpmath.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import reduce

import flint
import mpmath

__all__ = [
    "QRat",
    "QRatError",
    "QParseError",
    "ZERO",
    "ONE",
    "Q",
    "U",
    "qpow",
    "qint",
    "qrat",
    "parse",
]


class QRatError(ArithmeticError):
    """Raised on division by zero or evaluation at a pole."""


class QParseError(ValueError):
    """Malformed QRat text; ``pos`` is the offending character offset."""

    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_P = flint.fmpz_poly
_ONE_POLY = _P([1])


def _valuation(p):
    """Order of vanishing of p at u = 0 (p nonzero)."""
    for i, c in enumerate(p.coeffs()):
        if c:
            return i
    return 0


def _strip(p, v):
    return _P(p.coeffs()[v:]) if v else p


def _upoly(e):
    return _P([0] * e + [1])


class QRat:
    """An element of Q(u), u = q^(1/2), in canonical reduced form.

    Stored as ``u**e * n / d`` with n, d integer polynomials whose constant
    terms are nonzero.  Invariants: n and d are coprime in Z[u] (so the
    joint integer content is 1) and d has a positive leading coefficient.
    Zero is ``e = 0, n = 0, d = 1``.  Keeping the power of u apart keeps the
    gcd operands small when exponents are large.
    """

    __slots__ = ("e", "n", "d", "_hash")

    def __init__(self, num=0, den=1):
        if not isinstance(num, _P):
            num = _P(num) if isinstance(num, (list, tuple)) else _P([int(num)])
        if not isinstance(den, _P):
            den = _P(den) if isinstance(den, (list, tuple)) else _P([int(den)])
        if den.degree() < 0:
            raise QRatError("zero denominator")
        self._hash = None
        if num.degree() < 0:
            self.e, self.n, self.d = 0, _P([]), _ONE_POLY
            return
        vn, vd = _valuation(num), _valuation(den)
        self.e = vn - vd
        self.n, self.d = _reduce(_strip(num, vn), _strip(den, vd))

    @classmethod
    def _make(cls, e, n, d):
        """Trusted constructor from already-canonical parts."""
        obj = object.__new__(cls)
        obj.e, obj.n, obj.d, obj._hash = e, n, d, None
        return obj

    @property
    def num(self):
        """Numerator as a polynomial in u (the power of u folded in)."""
        return self.n * _upoly(self.e) if self.e > 0 else self.n

    @property
    def den(self):
        return self.d * _upoly(-self.e) if self.e < 0 else self.d

    def size(self):
        """Total degree of the stored parts, a proxy for arithmetic cost."""
        return self.n.degree() + self.d.degree()

    # construction helpers -------------------------------------------------
    @classmethod
    def from_laurent(cls, terms):
        """Build from ``{u_exponent: integer coefficient}`` (exponents may be negative)."""
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return ZERO
        lo = min(terms)
        coeffs = [0] * (max(terms) - lo + 1)
        for e, c in terms.items():
            coeffs[e - lo] = int(c)
        return cls._make(lo, _P(coeffs), _ONE_POLY)

    @classmethod
    def from_fraction(cls, x):
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    # predicates -------------------------------------------------------------
    def is_zero(self):
        return self.n.degree() < 0

    def __bool__(self):
        return self.n.degree() >= 0

    def is_one(self):
        return self.e == 0 and self.n == self.d

    def is_constant(self):
        return self.e == 0 and self.n.degree() <= 0 and self.d.degree() == 0

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QRat):
            return other
        if isinstance(other, int):
            return QRat(other)
        if isinstance(other, Fraction):
            return QRat.from_fraction(other)
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, QRat):
            other = self._coerce(other)
            if other is NotImplemented:
                return other
        if other.n.degree() < 0:
            return self
        if self.n.degree() < 0:
            return other
        e1, e2 = self.e, other.e
        if self.d == other.d:
            n1, n2, d = self.n, other.n, self.d
        else:
            n1, n2, d = self.n * other.d, other.n * self.d, self.d * other.d
        if e1 == e2:
            n = n1 + n2
            if n.degree() < 0:
                return ZERO
            v = _valuation(n)
            e = e1 + v
            n = _strip(n, v)
        elif e1 < e2:
            n, e = n1 + n2 * _upoly(e2 - e1), e1
        else:
            n, e = n1 * _upoly(e1 - e2) + n2, e2
        n, d = _reduce(n, d)
        return QRat._make(e, n, d)

    __radd__ = __add__

    def __neg__(self):
        return QRat._make(self.e, -self.n, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if not isinstance(other, QRat):
            other = self._coerce(other)
            if other is NotImplemented:
                return other
        if self.n.degree() < 0 or other.n.degree() < 0:
            return ZERO
        e = self.e + other.e
        a, b, c, d = self.n, self.d, other.n, other.d
        if b.degree() == 0 and d.degree() == 0 and b == _ONE_POLY and d == _ONE_POLY:
            return QRat._make(e, a * c, _ONE_POLY)
        # cross-cancel; coprime reduced inputs stay coprime afterwards
        g1 = a.gcd(d)
        g2 = c.gcd(b)
        if g1 != _ONE_POLY:
            a, d = a // g1, d // g1
        if g2 != _ONE_POLY:
            c, b = c // g2, b // g2
        return QRat._make(e, a * c, b * d)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise QRatError("division by zero QRat")
        n, d = self.d, self.n
        if d.coeffs()[-1] < 0:
            n, d = -n, -d
        return QRat._make(-self.e, n, d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return ONE
        return QRat._make(self.e * k, self.n ** k, self.d ** k)

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, QRat):
            other = self._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return self.e == other.e and self.n == other.n and self.d == other.d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.e, tuple(int(c) for c in self.n.coeffs()),
                               tuple(int(c) for c in self.d.coeffs())))
        return self._hash

    # evaluation -------------------------------------------------------------
    def eval_u(self, u):
        """Evaluate at a numeric value of u = q^(1/2)."""
        d = _horner(self.d, u)
        if abs(d) < 1e-12 or (self.e < 0 and abs(u) < 1e-12):
            raise QRatError(f"pole: denominator {self.den_text()} vanishes at u={u}")
        return _horner(self.n, u) / d * complex(u) ** self.e

    def eval_precise(self, u, dps=50):
        """Evaluate at u with mpmath working precision ``dps`` (avoids cancellation in long sums)."""
        with mpmath.workdps(dps):
            x = mpmath.mpc(u)
            d = _horner_mp(self.d, x)
            if d == 0:
                raise QRatError(f"pole: denominator {self.den_text()} vanishes at u={u}")
            return complex(_horner_mp(self.n, x) / d * x ** self.e)

    def eval(self, q):
        """Evaluate at a numeric q (principal branch for q^(1/2))."""
        return self.eval_u(cmath.sqrt(complex(q)))

    def at_one(self):
        """Exact value at q = 1 as a Fraction (raises at a pole)."""
        d = sum(int(c) for c in self.d.coeffs())
        if d == 0:
            raise QRatError("pole at q=1")
        return Fraction(sum(int(c) for c in self.n.coeffs()), d)

    # text -------------------------------------------------------------------
    def __str__(self):
        return format_qrat(self)

    def __repr__(self):
        return f"QRat({format_qrat(self)!r})"

    def den_text(self):
        return _poly_text(self.den)

    def to_json(self):
        return format_qrat(self)


def _reduce(num, den):
    if num.degree() < 0:
        return _P([]), _P([1])
    # fmpz_poly gcd carries the gcd of the contents and a positive leading coefficient
    g = num.gcd(den)
    if g != _ONE_POLY:
        num = num // g
        den = den // g
    if den.coeffs()[-1] < 0:
        num, den = -num, -den
    return num, den


def _horner(p, x):
    acc = 0j
    for c in reversed(p.coeffs()):
        acc = acc * x + int(c)
    return acc


def _horner_mp(p, x):
    acc = mpmath.mpc(0)
    for c in reversed(p.coeffs()):
        acc = acc * x + int(c)
    return acc


def _mono_text(e):
    """u**e as text in terms of q."""
    if e == 0:
        return ""
    if e % 2 == 0:
        k = e // 2
        return "q" if k == 1 else f"q^{k}"
    return "q^(1/2)" if e == 1 else f"q^({e}/2)"


def _poly_text(p):
    coeffs = [int(c) for c in p.coeffs()]
    parts = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if not c:
            continue
        mono = _mono_text(e)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += sign + body
    return text


def _nterms(p):
    return sum(1 for c in p.coeffs() if int(c))


def format_qrat(a):
    n = _poly_text(a.num)
    if a.den == _P([1]):
        return n
    d = _poly_text(a.den)
    if _nterms(a.num) > 1:
        n = f"({n})"
    if _nterms(a.den) > 1 or (a.den.degree() > 0 and int(a.den.coeffs()[-1]) != 1):
        d = f"({d})"
    return f"{n}/{d}"


ZERO = QRat._make(0, _P([]), _ONE_POLY)
ONE = QRat._make(0, _P([1]), _ONE_POLY)
U = QRat._make(1, _P([1]), _ONE_POLY)
Q = QRat._make(2, _P([1]), _ONE_POLY)


def upow(e):
    """u**e for any integer e."""
    return QRat.from_laurent({e: 1})


def qpow(e):
    """q**e; ``e`` may be an integer or a half-integer (Fraction or float)."""
    e2 = Fraction(e) * 2
    if e2.denominator != 1:
        raise ValueError(f"q exponent {e} is not a half-integer")
    return upow(int(e2))


def qint(n):
    """The quantum integer [n] = (q^n - q^-n)/(q - q^-1)."""
    if n == 0:
        return ZERO
    return (qpow(n) - qpow(-n)) / (Q - qpow(-1))


def qrat(x):
    """Coerce int, Fraction, str or QRat to QRat."""
    if isinstance(x, QRat):
        return x
    if isinstance(x, str):
        return parse(x)
    if isinstance(x, int):
        return QRat(x)
    if isinstance(x, Fraction):
        return QRat.from_fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to QRat")


# parser ---------------------------------------------------------------------
#   expr   := term (('+'|'-') term)*
#   term   := unary (('*'|'/') unary)*
#   unary  := '-' unary | power
#   power  := atom ('^' exponent)?
#   atom   := INT | 'q' | '(' expr ')'
#   exponent := INT | '(' ['-'] INT ['/' INT] ')' | '-' INT


class _Parser:
    def __init__(self, text):
        self.s = text
        self.i = 0

    def peek(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1
        return self.s[self.i] if self.i < len(self.s) else ""

    def eat(self, ch):
        if self.peek() != ch:
            raise QParseError(f"expected {ch!r}", self.i)
        self.i += 1

    def integer(self):
        self.peek()
        j = self.i
        while self.i < len(self.s) and self.s[self.i].isdigit():
            self.i += 1
        if j == self.i:
            raise QParseError("expected integer", self.i)
        return int(self.s[j:self.i])

    def parse(self):
        if not self.peek():
            raise QParseError("empty expression", 0)
        v = self.expr()
        if self.peek():
            raise QParseError(f"unexpected {self.peek()!r}", self.i)
        return v

    def expr(self):
        v = self.term()
        while self.peek() in ("+", "-"):
            op = self.s[self.i]
            self.i += 1
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek() in ("*", "/"):
            op = self.s[self.i]
            pos = self.i
            self.i += 1
            w = self.unary()
            if op == "*":
                v = v * w
            else:
                if w.is_zero():
                    raise QParseError("zero denominator", pos)
                v = v / w
        return v

    def unary(self):
        if self.peek() == "-":
            self.i += 1
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() != "^":
            return base
        pos = self.i
        self.i += 1
        e = self.exponent()
        if e.denominator != 1:
            if base != Q:
                raise QParseError("fractional exponent only allowed on q", pos)
            return qpow(e)
        if e < 0 and base.is_zero():
            raise QParseError("zero denominator", pos)
        return base ** int(e)

    def exponent(self):
        ch = self.peek()
        if ch == "(":
            self.i += 1
            sign = 1
            if self.peek() == "-":
                self.i += 1
                sign = -1
            n = self.integer()
            d = 1
            if self.peek() == "/":
                self.i += 1
                d = self.integer()
                if d not in (1, 2):
                    raise QParseError("exponent denominator must be 1 or 2", self.i)
            self.eat(")")
            return Fraction(sign * n, d)
        if ch == "-":
            self.i += 1
            return Fraction(-self.integer())
        return Fraction(self.integer())

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.i += 1
            v = self.expr()
            self.eat(")")
            return v
        if ch == "q":
            self.i += 1
            return Q
        if ch.isdigit():
            return QRat(self.integer())
        raise QParseError(f"unexpected {ch!r}" if ch else "unexpected end", self.i)


def parse(text):
    """Parse a QRat from text such as ``"(q^6+1)/(q^4+q^2)"`` or ``"q^(1/2)"``."""
    return _Parser(text).parse()


def qsum(values):
    return reduce(lambda a, b: a + b, values, ZERO)
