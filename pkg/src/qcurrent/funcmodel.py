"""Symmetric polynomials with q-shifted diagonal vanishing, and the residue pairing.

A degree-e symmetric polynomial in t_1..t_n pairs with a charge-n quotient
monomial xbar_{i_1}..xbar_{i_n} through the residue of f * prod t_j^{i_j} dt_j,
so the relevant polynomial degree is  sum(-1 - i_j) = d - n  for energy d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations

from .ideal_lab import PRODUCT, _relation_rows, graded_quotient_dims, partitions, quotient_basis
from .linalg import nullspace, rank
from .qfield import ONE, ZERO, QRat, qpow


def _partitions_upto(d, n):
    """Partitions of d with at most n parts."""
    out = []
    for m in range(0, n + 1):
        out.extend(partitions(d, m))
    return out


@dataclass(frozen=True)
class SymPoly:
    """Symmetric polynomial: {partition (non-increasing, no zero parts): coefficient of m_lambda}."""

    n: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for lam, c in self.coeffs.items():
            lam = tuple(sorted((p for p in lam if p), reverse=True))
            if len(lam) > self.n:
                raise ValueError(f"partition {lam} has more than {self.n} parts")
            if c:
                clean[lam] = clean[lam] + c if lam in clean else c
        object.__setattr__(self, "coeffs", {k: v for k, v in clean.items() if v})

    def coefficient(self, exponents):
        """Coefficient of the monomial prod t_j^{exponents[j]}."""
        return self.coeffs.get(tuple(sorted((e for e in exponents if e), reverse=True)), ZERO)

    def degrees(self):
        return {sum(lam) for lam in self.coeffs}

    def monomials(self):
        """All (exponent vector, coefficient) pairs of the expanded polynomial."""
        for lam, c in self.coeffs.items():
            padded = lam + (0,) * (self.n - len(lam))
            for alpha in set(permutations(padded)):
                yield alpha, c

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return SymPoly(self.n, out)

    def scale(self, s):
        return SymPoly(self.n, {k: v * s for k, v in self.coeffs.items()})

    def evaluate(self, point):
        acc = ZERO
        for alpha, c in self.monomials():
            term = c
            for t, e in zip(point, alpha):
                term = term * t ** e
            acc = acc + term
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*m{list(lam)}" for lam, c in sorted(self.coeffs.items()))


@dataclass(frozen=True)
class VanishingSpec:
    k: int = 1
    l: int = 0

    def __post_init__(self):
        if self.k < 1 or not 0 <= self.l <= self.k:
            raise ValueError(f"need k >= 1 and 0 <= l <= k, got k={self.k}, l={self.l}")

    def diagonal_applies(self, n):
        return n >= self.k + 1

    def origin_applies(self, n):
        return n >= self.k - self.l + 1


def _condition_rows(n, d, spec):
    cols = _partitions_upto(d, n)
    index = {lam: j for j, lam in enumerate(cols)}
    eqs = {}
    k = spec.k
    if spec.diagonal_applies(n):
        # t_j = s q^{-2(j-1)} for j <= k+1; key: (power of s, remaining exponents)
        for lam in cols:
            padded = lam + (0,) * (n - len(lam))
            for alpha in set(permutations(padded)):
                head, rest = alpha[:k + 1], alpha[k + 1:]
                key = ("diag", sum(head), rest)
                c = qpow(-2 * sum(j * a for j, a in enumerate(head)))
                row = eqs.setdefault(key, {})
                j = index[lam]
                row[j] = row[j] + c if j in row else c
    if spec.origin_applies(n):
        b = spec.k - spec.l + 1
        for lam in cols:
            if len(lam) <= n - b:
                # surviving monomials have t_1..t_b absent; one per partition
                eqs.setdefault(("origin", lam), {})[index[lam]] = ONE
    return cols, list(eqs.values())


def vanishing_subspace(n, d, spec=VanishingSpec()):
    """Basis of degree-d symmetric polynomials obeying the diagonal and origin conditions."""
    if n < 0 or d < 0:
        raise ValueError("need n >= 0 and d >= 0")
    cols, rows = _condition_rows(n, d, spec)
    return [SymPoly(n, {cols[j]: c for j, c in v.items()}) for v in nullspace(rows, len(cols))]


def residue_pair(f, exponents):
    """Sum over orderings of the coefficient of prod t_j^{-1-i_j} in f."""
    if len(exponents) != f.n:
        raise ValueError(f"expected {f.n} exponents, got {len(exponents)}")
    if any(i > -1 for i in exponents):
        raise ValueError("exponents must be <= -1")
    return f.coefficient([-1 - i for i in exponents]) * QRat(math.factorial(f.n))


@dataclass
class DualityRow:
    n: int
    energy: int
    quotient_dim: int
    vanishing_dim: int
    pairing_rank: int
    ideal_orthogonal: bool
    origin_flag: bool

    @property
    def ok(self):
        return (self.quotient_dim == self.vanishing_dim == self.pairing_rank
                and self.ideal_orthogonal)


@dataclass
class DualityReport:
    rows: list

    @property
    def passed(self):
        return all(r.ok for r in self.rows)

    def tsv(self):
        out = ["charge\tenergy\tquotient_dim\tvanishing_dim\tpairing_rank\tideal_orthogonal\tok"]
        for r in self.rows:
            note = "" if not r.origin_flag else "\tfewer variables than origin condition"
            out.append(f"{r.n}\t{r.energy}\t{r.quotient_dim}\t{r.vanishing_dim}\t{r.pairing_rank}"
                       f"\t{r.ideal_orthogonal}\t{r.ok}{note}")
        return "\n".join(out)


def duality_check(n, energies, k=1, l=0):
    """Compare quotient pieces with vanishing subspaces through the residue pairing."""
    spec = VanishingSpec(k, l)
    rows = []
    for d in energies:
        e = d - n
        if e < 0:
            continue
        qdim = graded_quotient_dims(k, l, n, d)
        vb = vanishing_subspace(n, e, spec)
        qb = quotient_basis(k, l, n, d)
        matrix = [[residue_pair(f, list(mono)) for f in vb] for mono in qb]
        prank = rank([{j: x for j, x in enumerate(r) if x} for r in matrix]) if matrix else 0
        cols, rel = _relation_rows(k, l, n, d, PRODUCT)
        lams = {j: lam for lam, j in cols.items()}
        orth = True
        for f in vb:
            for row in rel:
                acc = ZERO
                for j, c in row.items():
                    acc = acc + c * residue_pair(f, [-p for p in lams[j]])
                if acc:
                    orth = False
                    break
            if not orth:
                break
        rows.append(DualityRow(n, d, qdim, len(vb), prank, orth,
                               origin_flag=not spec.origin_applies(n)))
    return DualityReport(rows)
