"""The graded commutative quotient  C[xbar_{-1}, xbar_{-2}, ...] / I.

I is generated by the (k+1)-fold current products S_i (restricted to
indices <= -1) and by xbar_{-1}^{k-l+1}.  A bigraded piece has charge n
(number of factors) and energy d (minus the sum of the indices).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

from .linalg import echelon
from .qfield import ONE, ZERO, QRat

PRODUCT = "product"
PRINTED = "printed"
SOURCES = (PRODUCT, PRINTED)


class WindowError(ValueError):
    pass


# -- commutative polynomials ------------------------------------------------------

@dataclass(frozen=True)
class CommPoly:
    """Polynomial in commuting variables xbar_i; keys are sorted index tuples."""

    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(sorted(k)): v for k, v in self.terms.items() if v}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def var(cls, i):
        return cls({(i,): ONE})

    @classmethod
    def const(cls, c):
        return cls({(): c})

    def one(self):
        return CommPoly({(): ONE})

    def is_constant(self):
        return all(k == () for k in self.terms)

    def constant_term(self):
        return self.terms.get((), ZERO)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, CommPoly):
            return self.terms == other.terms
        if isinstance(other, (QRat, int)):
            return self == CommPoly.const(QRat(other) if isinstance(other, int) else other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, CommPoly):
            other = CommPoly.const(other if isinstance(other, QRat) else QRat(other))
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return CommPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return CommPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CommPoly):
            other = other if isinstance(other, QRat) else QRat(other)
            return CommPoly({k: v * other for k, v in self.terms.items()})
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(sorted(k1 + k2))
                out[k] = out[k] + v1 * v2 if k in out else v1 * v2
        return CommPoly(out)

    __rmul__ = __mul__

    def degree_data(self):
        """Set of (charge, mode degree) pairs of the terms."""
        return {(len(k), sum(k)) for k in self.terms}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda t: (len(t), sorted(t, reverse=True)), reverse=True):
            mono = "*".join(f"x[{i}]" for i in sorted(k, reverse=True)) or "1"
            parts.append(f"({self.terms[k]})*{mono}")
        return " + ".join(parts)


# -- S-elements --------------------------------------------------------------------

@dataclass(frozen=True)
class SElement:
    k: int
    i: int
    window: tuple
    poly: CommPoly
    source: str = PRODUCT


@lru_cache(maxsize=None)
def s_coefficient(A, source=PRODUCT):
    """Coefficient of the monomial with index multiset A in S_{sum A}."""
    sign = -1 if source == PRODUCT else 1
    terms = Counter()
    for perm in set(permutations(A)):
        terms[sign * 4 * sum(j * a for j, a in enumerate(perm))] += 1
    c = QRat.from_laurent(dict(terms))
    if source == PRINTED:
        c = c * QRat(math.factorial(len(A)))
    elif source != PRODUCT:
        raise ValueError(f"unknown S source {source!r}")
    return c


def multisets(size, total, lo, hi):
    """Sorted tuples of ``size`` integers in [lo, hi] with the given sum."""
    if size == 0:
        if total == 0:
            yield ()
        return
    if size == 1:
        if lo <= total <= hi:
            yield (total,)
        return
    a_min = max(lo, total - (size - 1) * hi)
    for a in range(a_min, total // size + 1):
        for rest in multisets(size - 1, total - a, a, hi):
            yield (a,) + rest


def s_elements(k, i, window, source=PRODUCT):
    """S_i at level k over the index window [lo, hi]."""
    lo, hi = window
    if lo > hi or not lo * (k + 1) <= i <= hi * (k + 1):
        raise WindowError(f"window {window} too small for S_{i} at level {k}")
    terms = {A: s_coefficient(A, source) for A in multisets(k + 1, i, lo, hi)}
    return SElement(k, i, (lo, hi), CommPoly(terms), source)


# -- graded quotient -------------------------------------------------------------

def partitions(d, n):
    """Partitions of d into exactly n positive parts, as non-increasing tuples."""
    if n == 0:
        return [()] if d == 0 else []
    out = []

    def rec(rem, parts, cap):
        left = n - len(parts)
        if left == 0:
            if rem == 0:
                out.append(tuple(parts))
            return
        for p in range(min(cap, rem - (left - 1)), 0, -1):
            if p * left < rem:
                break
            rec(rem - p, parts + [p], p)

    rec(d, [], d)
    return out


def _relation_rows(k, l, n, d, source):
    cols = {lam: j for j, lam in enumerate(partitions(d, n))}
    rows = []
    # S-generators: S_m (all indices <= -1) times a monomial with n-k-1 factors
    if n >= k + 1:
        for e in range(k + 1, d + 1):
            gen = {A: s_coefficient(A, source) for A in multisets(k + 1, -e, -e, -1)}
            for lam in partitions(d - e, n - k - 1):
                row = {}
                for A, c in gen.items():
                    key = tuple(sorted([-a for a in A] + list(lam), reverse=True))
                    row[cols[key]] = row[cols[key]] + c if cols[key] in row else c
                rows.append(row)
    b = k - l + 1
    if n >= b:
        for lam in partitions(d - b, n - b):
            key = tuple(sorted([1] * b + list(lam), reverse=True))
            rows.append({cols[key]: ONE})
    return cols, rows


def graded_quotient_dims(k, l, n, d, window=None, source=PRODUCT):
    """dim of the (charge n, energy d) piece of the quotient, by exact rank."""
    _check_level(k, l)
    if n < 0 or d < 0:
        return 0
    need = -(d - n + 1) if n else 0
    if window is not None and n and d >= n and window > need:
        raise WindowError(f"window {window} does not reach index {need}")
    cols, rows = _relation_rows(k, l, n, d, source)
    return len(cols) - len(echelon(rows))


def quotient_basis(k, l, n, d):
    """Difference-condition monomials of the piece (as sorted index tuples)."""
    out = []
    for lam in partitions(d, n):
        idx = sorted(-p for p in lam)
        if _difference_ok(idx, k, l):
            out.append(tuple(idx))
    return out


def _difference_ok(idx, k, l):
    if idx.count(-1) > k - l:
        return False
    return all(idx[j + k] - idx[j] > 1 for j in range(len(idx) - k))


def difference_basis_count(k, l, n, d):
    """Brute-force count of index multisets <= -1 obeying the difference condition."""
    _check_level(k, l)
    return len(quotient_basis(k, l, n, d))


@dataclass
class IdealComparison:
    rows: list

    @property
    def equal(self):
        return all(r["equal"] for r in self.rows)

    def tsv(self):
        lines = ["charge\tenergy\tproduct\tprinted\tsame_span"]
        for r in self.rows:
            lines.append(f"{r['charge']}\t{r['energy']}\t{r['product']}\t{r['printed']}\t{r['equal']}")
        return "\n".join(lines)


def compare_ideals(k, l, max_energy, max_charge=None):
    """Compare the product-source and printed-source ideals bigrade by bigrade."""
    rows = []
    for d in range(max_energy + 1):
        top = d if max_charge is None else min(d, max_charge)
        for n in range(0, top + 1):
            cols, r1 = _relation_rows(k, l, n, d, PRODUCT)
            _, r2 = _relation_rows(k, l, n, d, PRINTED)
            a, b, ab = len(echelon(r1)), len(echelon(r2)), len(echelon(r1 + r2))
            rows.append({"charge": n, "energy": d, "product": len(cols) - a,
                         "printed": len(cols) - b, "equal": a == b == ab})
    return IdealComparison(rows)


def _check_level(k, l):
    if k < 1 or not 0 <= l <= k:
        raise ValueError(f"need k >= 1 and 0 <= l <= k, got k={k}, l={l}")
