"""Semi-infinite monomial models of the integrable modules V_{l,k}.

A vector of the model is a linear combination of semi-infinite commutative
products  xbar_{i_1} ... xbar_{i_m} * T_N  where

    T_N = xbar_{2N}^l xbar_{2N+1}^{k-l} xbar_{2N+2}^l xbar_{2N+3}^{k-l} ...

is the stable tail.  The highest weight vector is T_0.  Two rules cut the
span down to the module:

* a product containing T_N and an extra factor xbar_u with u >= 2N, or
  containing xbar_{2N-1}^{k-l} T_N and one more factor with index >= 2N-1,
  is zero;
* the (k+1)-fold current products S_n = [z^-n] xbar(z) xbar(zq^2) ...
  xbar(zq^{2k}) annihilate every vector.

Every product reduces to a combination of difference-condition monomials
(sorted indices with i_{j+k} - i_j >= 2).  Reduction always rewrites the
most concentrated (k+1)-window with the S-relation whose leading term it
is; all other terms of that relation are strictly smaller in the
ascending-lexicographic order, so the rewriting terminates.
"""

from __future__ import annotations

import cmath
import sys
import json
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .heisenberg import STANDARD, LevelContext, gamma_bar
from .ideal_lab import multisets as multisets_with_sum
from .ideal_lab import partitions, s_coefficient
from .linalg import echelon, nullspace
from .qfield import ONE, ZERO, Q, QRat, qpow

_QQ = Q - qpow(-1)


class WindowExhausted(RuntimeError):
    pass


class ResummationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TailDescriptor:
    k: int
    l: int
    N: int

    def block(self, j=None):
        """Indices of the tail block starting at 2j (default: the first block)."""
        j = self.N if j is None else j
        return (2 * j,) * self.l + (2 * j + 1,) * (self.k - self.l)


@dataclass(frozen=True)
class SemiMonomial:
    exc: tuple
    tail: TailDescriptor

    def indices(self, blocks=2):
        """Sorted finite prefix: excitations followed by ``blocks`` unfolded tail blocks."""
        out = list(self.exc)
        for j in range(self.tail.N, self.tail.N + blocks):
            out.extend(self.tail.block(j))
        return out

    def to_json(self):
        return {"excitations": list(self.exc), "k": self.tail.k, "l": self.tail.l,
                "tail_start": self.tail.N}

    def __str__(self):
        t = self.tail
        head = "".join(f"x{i}" for i in self.exc)
        return f"{head}|T{t.N}" if head else f"|T{t.N}"


@dataclass(frozen=True)
class TruncationWindow:
    D: int = 10
    P: int = 12

    def __post_init__(self):
        if self.D < 0:
            raise ValueError("max energy D must be >= 0")
        if self.P < 3:
            raise ValueError("probe depth P must be >= k+2 (at least 3)")


def _add_into(acc, vec, scale):
    for m, c in vec.items():
        v = acc.get(m)
        nv = c * scale if v is None else v + c * scale
        if nv:
            acc[m] = nv
        else:
            acc.pop(m, None)


def vec_add(*vecs):
    acc = {}
    for v in vecs:
        _add_into(acc, v, ONE)
    return acc


def vec_scale(v, s):
    if not s:
        return {}
    return {m: c * s for m, c in v.items()}


@lru_cache(maxsize=None)
def _ratio(A_rel, L_rel):
    return -s_coefficient(A_rel) / s_coefficient(L_rel)


class SemiModule:
    """The model of V_{l,k}; caches straightening results per instance."""

    def __init__(self, k=1, l=0, convention=STANDARD, max_steps=2_000_000):
        if k < 1 or not 0 <= l <= k:
            raise ValueError(f"need k >= 1 and 0 <= l <= k, got k={k}, l={l}")
        self.k, self.l = k, l
        self.ctx = LevelContext(c=k, convention=convention)
        self.max_steps = max_steps
        self._memo = {}
        self._mul = {}
        self._active = set()
        self._blocksum_cache = {}

    # -- monomial bookkeeping -----------------------------------------------
    def tail(self, N):
        return TailDescriptor(self.k, self.l, N)

    def vacuum_monomial(self):
        return SemiMonomial((), self.tail(0))

    def vacuum(self):
        return {self.vacuum_monomial(): ONE}

    def normalize(self, F, N):
        """Minimal-tail representative of the product  prod(F) * T_N."""
        cnt = Counter(F)
        while True:
            blk = Counter(self.tail(N - 1).block())
            if all(cnt[i] >= m for i, m in blk.items()):
                cnt.subtract(blk)
                N -= 1
            else:
                break
        return SemiMonomial(tuple(sorted(cnt.elements())), self.tail(N))

    def monomial(self, excitations, N=0):
        return self.normalize(list(excitations), N)

    def block_sum(self, N):
        """T(N) = sum of the indices in blocks 0..N-1 (extended polynomially to N < 0)."""
        k, l = self.k, self.l
        return k * N * (N - 1) + (k - l) * N

    def energy(self, m):
        return self.block_sum(m.tail.N) - sum(m.exc)

    def charge(self, m):
        return 2 * (len(m.exc) - self.k * m.tail.N)

    def _check_shift(self, v, out, shift):
        """Assert that a homogeneous input maps to the expected bigrade."""
        grades = {self.bigrade(m) for m in v}
        if len(grades) != 1 or not out:
            return
        c, e = grades.pop()
        want = (c + shift[0], e + shift[1])
        for m in out:
            if self.bigrade(m) != want:
                raise AssertionError(f"action produced bigrade {self.bigrade(m)}, expected {want}")

    def bigrade(self, m):
        return self.charge(m), self.energy(m)

    def is_killed(self, m):
        N = m.tail.N
        if not m.exc:
            return False
        if m.exc[-1] >= 2 * N:
            return True
        return m.exc.count(2 * N - 1) >= self.k - self.l + 1

    def violations(self, m):
        seq = m.indices(2)
        k = self.k
        return [j for j in range(len(m.exc)) if seq[j + k] - seq[j] <= 1]

    def is_basis(self, m):
        return not self.is_killed(m) and not self.violations(m)

    # -- straightening -------------------------------------------------------
    def _expand(self, m, j):
        """One S-relation rewrite of monomial m at violating window j."""
        k = self.k
        # unfold only the tail blocks the window reaches into
        over = j + k + 1 - len(m.exc)
        blocks = 0 if over <= 0 else -(-over // k)
        seq = m.indices(blocks)
        L = tuple(seq[j:j + k + 1])
        rest = list(seq)
        del rest[j:j + k + 1]
        N2 = m.tail.N + blocks
        n = sum(L)
        hi = 2 * N2 - 1
        lo = n - k * hi
        out = []
        base = L[0]
        L_rel = tuple(x - base for x in L)
        for A in multisets_with_sum(k + 1, n, lo, hi):
            if A == L:
                continue
            mm = self.normalize(rest + list(A), N2)
            if self.is_killed(mm):
                continue
            out.append((_ratio(tuple(a - base for a in A), L_rel), mm))
        return out

    def rewrite_normal_form(self, m, rng=None):
        """Reduce a monomial by rewriting arbitrary violating windows (reference path).

        With ``rng`` the window is chosen at random, which gives a confluence test.
        """
        memo = self._memo if rng is None else {}
        if m in memo:
            return memo[m]
        stack = [m]
        pending = {}
        steps = 0
        while stack:
            top = stack[-1]
            if top in memo:
                stack.pop()
                continue
            steps += 1
            if steps > self.max_steps:
                raise WindowExhausted("window exhausted, increase P (straightening did not terminate)")
            if self.is_killed(top):
                memo[top] = {}
                stack.pop()
                continue
            exp = pending.get(top)
            if exp is None:
                viol = self.violations(top)
                if not viol:
                    memo[top] = {top: ONE}
                    stack.pop()
                    continue
                j = viol[-1] if rng is None else rng.choice(viol)
                exp = self._expand(top, j)
                pending[top] = exp
            missing = [mm for _, mm in exp if mm not in memo]
            if missing:
                stack.extend(missing)
                continue
            acc = {}
            for c, mm in exp:
                _add_into(acc, memo[mm], c)
            memo[top] = acc
            del pending[top]
            stack.pop()
        return memo[m]

    def canonicalize(self, m):
        """Reduce a monomial to a combination of basis monomials.

        The excitations are multiplied onto the tail one at a time, largest first,
        through the memoized table xbar_a * (basis monomial).
        """
        vec = {self.normalize([], m.tail.N): ONE}
        for a in sorted(m.exc, reverse=True):
            vec = self.mul_vector(a, vec)
            if not vec:
                break
        return vec

    def mul_vector(self, a, v):
        acc = {}
        for w, c in v.items():
            _add_into(acc, self.mul_basis(a, w), c)
        return acc

    def mul_basis(self, a, v):
        """xbar_a times a basis monomial v, as a combination of basis monomials."""
        key = (a, v)
        hit = self._mul.get(key)
        if hit is not None:
            return hit
        if key in self._active:
            raise RuntimeError(f"cyclic reduction at xbar_{a} * {v}")
        m = self.normalize(list(v.exc) + [a], v.tail.N)
        if self.is_killed(m):
            out = {}
        elif not self.violations(m):
            out = {m: ONE}
        else:
            self._active.add(key)
            try:
                out = self._mul_reduce(m)
            finally:
                self._active.discard(key)
        self._mul[key] = out
        return out

    def _mul_reduce(self, m):
        k = self.k
        j = self.violations(m)[-1]
        over = j + k + 1 - len(m.exc)
        blocks = 0 if over <= 0 else -(-over // k)
        seq = m.indices(blocks)
        L = tuple(seq[j:j + k + 1])
        rest = list(seq)
        del rest[j:j + k + 1]
        w = self.normalize(rest, m.tail.N + blocks)
        n = sum(L)
        hi = 2 * w.tail.N - 1
        lo = n - k * hi
        base = L[0]
        L_rel = tuple(x - base for x in L)
        acc = {}
        for A in multisets_with_sum(k + 1, n, lo, hi):
            if A == L:
                continue
            vec = {w: ONE}
            for b in reversed(A):
                vec = self.mul_vector(b, vec)
                if not vec:
                    break
            if vec:
                _add_into(acc, vec, _ratio(tuple(b - base for b in A), L_rel))
        return acc

    def canonicalize_vector(self, v):
        acc = {}
        for m, c in v.items():
            _add_into(acc, self.canonicalize(m), c)
        return acc

    # -- actions ---------------------------------------------------------------
    def act_xbar(self, i, v):
        """Multiplication by xbar_i."""
        acc = {}
        for m, c in v.items():
            if self.is_basis(m):
                _add_into(acc, self.mul_basis(i, m), c)
            else:
                _add_into(acc, self.canonicalize(self.normalize(list(m.exc) + [i], m.tail.N)), c)
        self._check_shift(v, acc, (2, -i))
        return acc

    def act_xbar_word(self, word, v=None):
        v = self.vacuum() if v is None else v
        for i in word:
            v = self.act_xbar(i, v)
        return v

    def _shift_terms(self, m, n, blocks):
        """Leibniz terms of a mode shift by n: excitation terms, then one vector per tail block."""
        exc_terms = {}
        cnt = Counter(m.exc)
        for x, mult in cnt.items():
            F = list(m.exc)
            F.remove(x)
            F.append(x + n)
            _add_into(exc_terms, self.canonicalize(self.normalize(F, m.tail.N)), QRat(mult))
        tail_terms = []
        F = list(m.exc)
        N = m.tail.N
        for j in range(N, N + blocks):
            blk = self.tail(j).block()
            F = F + list(blk)
            vec = {}
            for x, mult in Counter(blk).items():
                G = list(F)
                G.remove(x)
                G.append(x + n)
                _add_into(vec, self.canonicalize(self.normalize(G, j + 1)), QRat(mult))
            tail_terms.append(vec)
        return exc_terms, tail_terms

    def act_a_pos(self, n, v, window=TruncationWindow()):
        """a_n (n >= 1) by the Leibniz rule; raised tail factors vanish past the probe depth."""
        if n < 1:
            raise ValueError("act_a_pos needs n >= 1")
        g = gamma_bar(n, self.ctx)
        acc = {}
        for m, c in v.items():
            exc_terms, tail_terms = self._shift_terms(m, n, window.P)
            if any(tail_terms[-2:]):
                raise WindowExhausted("a_n Leibniz sum did not stabilize within probe depth")
            _add_into(acc, exc_terms, c * g)
            for t in tail_terms:
                _add_into(acc, t, c * g)
        self._check_shift(v, acc, (0, -n))
        return acc

    def a0_eigenvalue(self, m):
        return self.charge(m) + self.l

    def act_a0(self, v):
        if not v:
            return {}
        eig = {self.a0_eigenvalue(m) for m in v}
        if len(eig) != 1:
            raise ValueError("act_a0: vector is not homogeneous in charge")
        return vec_scale(v, QRat(eig.pop()))

    def act_a_neg(self, n, v, window=TruncationWindow(), mode="symbolic", q_value=None, tol=1e-10,
                  max_terms=200):
        """a_{-n} (n >= 1) via the infinite Leibniz sum with tail resummation.

        Symbolic mode detects a constant-coefficient linear recurrence among
        the per-block contributions and sums it in closed form.  Numeric mode
        returns ``{monomial: complex}`` partial sums at ``q_value``.
        """
        if n < 1:
            raise ValueError("act_a_neg needs n >= 1")
        g = gamma_bar(-n, self.ctx)
        if mode == "symbolic":
            acc = {}
            for m, c in v.items():
                _add_into(acc, self.lower_sum(m, n, window.P), c * g)
            self._check_shift(v, acc, (0, n))
            return acc
        if mode != "numeric":
            raise ValueError(f"unknown mode {mode!r}")
        return self._lower_numeric(n, v, window, complex(q_value), tol, max_terms, g)

    def lower_sum(self, m, n, P):
        """Sum of all Leibniz terms lowering one factor of m by n (no gamma factor)."""
        exc_terms, tail_terms = self._shift_terms(m, -n, P)
        j0, rho = detect_recurrence(tail_terms)
        total = vec_add(exc_terms, *tail_terms[:j0])
        _add_into(total, resum(tail_terms[j0:], rho), ONE)
        return total

    def _lower_numeric(self, n, v, window, q, tol, max_terms, g):
        u = cmath.sqrt(q)
        acc = {}
        for m, c in v.items():
            exc_terms, probe = self._shift_terms(m, -n, window.P)
            j0, rho = detect_recurrence(probe)
            radius = spectral_radius(rho, u)
            # radius is computed in floating point; treat the unit circle as divergent
            if radius >= 1 - 1e-9:
                raise ResummationError(f"outside convergence region (|ratio| = {radius:.6g} >= 1)")
            scale = (c * g).eval_precise(u)
            for mm, val in exc_terms.items():
                acc[mm] = acc.get(mm, 0) + scale * val.eval_precise(u)
            terms = 0
            j = m.tail.N
            F = list(m.exc)
            while terms < max_terms:
                blk = self.tail(j).block()
                F = F + list(blk)
                vec = {}
                for x, mult in Counter(blk).items():
                    G = list(F)
                    G.remove(x)
                    G.append(x - n)
                    _add_into(vec, self.canonicalize(self.normalize(G, j + 1)), QRat(mult))
                norm = 0.0
                for mm, val in vec.items():
                    z = scale * val.eval_precise(u)
                    acc[mm] = acc.get(mm, 0) + z
                    norm = max(norm, abs(z))
                terms += 1
                j += 1
                # geometric tail bound once the recurrence regime is reached
                if terms > j0 + len(rho) and norm * radius / (1 - radius) < tol:
                    break
            else:
                raise ResummationError(f"numeric sum not converged within {max_terms} terms")
        return acc

    def act_psi(self, T, v, window=TruncationWindow()):
        """[psi_0 v, ..., psi_T v] for psi(z) = q^{a_0} exp((q - q^-1) sum_{n>0} a_n z^-n)."""
        p = [v]
        for m in range(1, T + 1):
            acc = {}
            for j in range(1, m + 1):
                if not p[m - j]:
                    continue
                _add_into(acc, self.act_a_pos(j, p[m - j], window), _QQ * QRat(j, m))
            p.append(acc)
        out = []
        for pm in p:
            out.append({mm: c * qpow(self.a0_eigenvalue(mm)) for mm, c in pm.items()})
        return out

    def psi_exchange_kernel(self, T):
        """Coefficients G_0..G_T of g(x q^{-c/2})^{-1} in x = w/z."""
        from .heisenberg import g_of_shifted
        s = g_of_shifted(T, self.k, power=-1)
        return [s[e] for e in range(T + 1)]

    def check_psi_exchange(self, T, v, modes, window=TruncationWindow()):
        """Coefficientwise psi_m xbar_i v == sum_s G_s xbar_{i+s} psi_{m-s} v; returns failures."""
        G = self.psi_exchange_kernel(T)
        psi_v = self.act_psi(T, v, window)
        failures = []
        for i in modes:
            lhs_all = self.act_psi(T, self.act_xbar(i, v), window)
            for m in range(T + 1):
                rhs = {}
                for s in range(m + 1):
                    if G[s]:
                        _add_into(rhs, self.act_xbar(i + s, psi_v[m - s]), G[s])
                if vec_add(lhs_all[m], vec_scale(rhs, -ONE)):
                    failures.append((i, m))
        return failures

    # -- S-elements on the module ---------------------------------------------
    def apply_s(self, n, v):
        """S_n v = sum over (k+1)-multisets A with sum n of S-coefficient * xbar_A v."""
        return self.current_product_coefficient(self.k + 1, n, v)

    def current_product_coefficient(self, factors, n, v):
        """[z^-n] xbar(z) xbar(zq^2) ... (``factors`` currents) applied to v."""
        acc = {}
        for m, c in v.items():
            for w, cw in self.canonicalize_vector({m: c}).items():
                self._product_dfs(factors, n, 2 * w.tail.N - 1, [], {w: cw}, acc)
        return acc

    def _product_dfs(self, left, total, upper, chosen, vec, acc):
        # factors chosen in descending order so partial products are shared
        if left == 0:
            if total == 0:
                _add_into(acc, vec, s_coefficient(tuple(reversed(chosen))))
            return
        a_min = -(-total // left)  # the largest remaining factor is >= ceil(total/left)
        for a in range(upper, a_min - 1, -1):
            if total - a > (left - 1) * a:
                break
            nxt = self.mul_vector(a, vec)
            if nxt:
                self._product_dfs(left - 1, total - a, a, chosen + [a], nxt, acc)

    # -- enumeration -----------------------------------------------------------
    def basis(self, charge, max_energy, min_energy=0):
        """Basis monomials of the given charge with min_energy <= energy <= max_energy."""
        k = self.k
        if charge % 2:
            return []
        Nb = max_energy + abs(charge) // 2 + k + 2
        m_total = charge // 2 + k * Nb
        if m_total < 0:
            return []
        target = self.block_sum(Nb) - max_energy
        tail_prefix = []
        for j in range(Nb, Nb + 2):
            tail_prefix.extend(self.tail(j).block())
        top = 2 * Nb - 1
        out = []

        def bound(r, x):
            return sum(x - 2 * (t // k) for t in range(r))

        def rec(chosen, total, upper):
            r = m_total - len(chosen)
            if r == 0:
                if total >= target:
                    mono = self.normalize(chosen, Nb)
                    e = self.energy(mono)
                    if min_energy <= e <= max_energy:
                        out.append(mono)
                return
            x = upper
            while True:
                if total + x + bound(r - 1, x) < target:
                    break
                # k-th element above x in ascending order
                above = chosen[-k] if len(chosen) >= k else tail_prefix[k - len(chosen) - 1]
                if above >= x + 2:
                    rec(chosen + [x], total + x, x)
                x -= 1

        rec([], 0, top)
        return sorted(out, key=lambda mm: (self.energy(mm), mm.exc, mm.tail.N))

    def charges(self, max_energy):
        """Charges carrying at least one basis monomial of energy <= max_energy."""
        out = []
        c = 0
        while True:
            found = [s for s in ((c, -c) if c else (0,)) if self.basis(s, max_energy)]
            if not found and c > 0:
                break
            out.extend(found)
            c += 2
        return sorted(out)

    def character(self, max_energy, sector="full"):
        """{(charge, energy): number of basis monomials}; sector='W' keeps products over T_0 of modes <= -1."""
        table = {}
        for c in self.charges(max_energy):
            for mono in self.basis(c, max_energy):
                # xbar_F T_0 with F <= -1 is exactly a minimal tail start N <= 0
                if sector == "W" and mono.tail.N > 0:
                    continue
                key = (c, self.energy(mono))
                table[key] = table.get(key, 0) + 1
        return dict(sorted(table.items()))

    def all_basis(self, max_energy):
        return [m for c in self.charges(max_energy) for m in self.basis(c, max_energy)]

    def w_dimension(self, particles, energy):
        """dim of the span of xbar_{a_1}..xbar_{a_n} T_0 (all a <= -1, sum = -energy)."""
        rows = []
        index = {}
        for lam in partitions(energy, particles):
            vec = self.canonicalize(self.normalize([-p for p in lam], 0))
            row = {}
            for mm, c in vec.items():
                row[index.setdefault(mm, len(index))] = c
            rows.append(row)
        return len(echelon(rows))

    def basis_json(self, max_energy):
        return json.dumps([dict(m.to_json(), charge=self.charge(m), energy=self.energy(m))
                           for m in self.all_basis(max_energy)])


# -- verification suites -----------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    checked: int
    failures: list

    @property
    def passed(self):
        return not self.failures

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name}\t{self.checked}\t{len(self.failures)}\t{status}"


def verify_integrability(module, window=TruncationWindow(), modes=6, factors=None):
    """[z^-i] of the (k+1)-fold q^2-shifted current product on basis vectors of the window.

    Only pairs whose image stays inside the window (energy(v) - i <= D) are
    checked.  With ``factors`` < k+1 the report lists the nonzero products
    instead (a control: fewer factors must not annihilate).
    """
    factors = module.k + 1 if factors is None else factors
    failures, checked = [], 0
    for v in module.all_basis(window.D):
        for i in range(-modes, modes + 1):
            if module.energy(v) - i > window.D:
                continue
            checked += 1
            if module.current_product_coefficient(factors, i, {v: ONE}):
                failures.append((v, i))
    return CheckReport(f"integrability(k={module.k},l={module.l},factors={factors})", checked, failures)


def verify_commutators(module, window=TruncationWindow(), modes=6):
    """xbar_i xbar_j v == xbar_j xbar_i v for basis v and images inside the window."""
    failures, checked = [], 0
    for v in module.all_basis(window.D):
        V = {v: ONE}
        e = module.energy(v)
        single = {i: module.act_xbar(i, V) for i in range(-modes, modes + 1)}
        for i in range(-modes, modes + 1):
            for j in range(i + 1, modes + 1):
                if e - i - j > window.D:
                    continue
                checked += 1
                if module.act_xbar(i, single[j]) != module.act_xbar(j, single[i]):
                    failures.append((v, i, j))
    return CheckReport(f"commutators(k={module.k},l={module.l})", checked, failures)


def verify_heisenberg(module, n_max=3, window=TruncationWindow()):
    """a_n a_{-n} vacuum == [a_n, a_{-n}] vacuum for n <= n_max (a_n kills the vacuum)."""
    from .heisenberg import bracket_aa
    failures = []
    vac = module.vacuum()
    for n in range(1, n_max + 1):
        lhs = module.act_a_pos(n, module.act_a_neg(n, vac, window), window)
        if lhs != vec_scale(vac, bracket_aa(n, -n, module.ctx)) or module.act_a_pos(n, vac, window):
            failures.append(n)
    return CheckReport(f"heisenberg(k={module.k},l={module.l})", n_max, failures)


def verify_psi_exchange(module, T=3, window=TruncationWindow(5), modes=3):
    failures, checked = [], 0
    for v in module.all_basis(window.D):
        checked += 1
        bad = module.check_psi_exchange(T, {v: ONE}, range(-modes, modes + 1), window)
        if bad:
            failures.append((v, bad))
    return CheckReport(f"psi_exchange(k={module.k},l={module.l},T={T})", checked, failures)


def verify_confluence(module, window=TruncationWindow(), samples=200, seed=0):
    """Random-order rewriting agrees with the table-driven normal form."""
    import random
    rng = random.Random(seed)
    basis = module.all_basis(window.D)
    failures = []
    for _ in range(samples):
        v = rng.choice(basis)
        extra = [rng.randint(-window.D, 2 * v.tail.N) for _ in range(rng.randint(1, module.k + 2))]
        m = module.normalize(list(v.exc) + extra, v.tail.N)
        if module.canonicalize(m) != module.rewrite_normal_form(m, rng=rng):
            failures.append(m)
    return CheckReport(f"confluence(k={module.k},l={module.l})", samples, failures)


def verify_suite(k=1, l=0, window=TruncationWindow(), modes=None):
    """All module self-checks at one window; returns a list of CheckReport."""
    M = SemiModule(k, l)
    modes = (6 if k == 1 else 4) if modes is None else modes
    return [
        verify_commutators(M, window, modes),
        verify_integrability(M, window, modes),
        verify_heisenberg(M, 3, window),
        verify_confluence(M, TruncationWindow(min(window.D, 4), window.P)),
        verify_psi_exchange(M, 3, TruncationWindow(min(window.D, 5), window.P), 3),
    ]


# -- recurrence detection and resummation --------------------------------------

def detect_recurrence(terms, max_order=None, checks=2):
    """Find (j0, rho) with terms[j+s] = sum_i rho[i] terms[j+i] for all j >= j0.

    ``rho`` empty means terms vanish from j0 on.  Raises ResummationError if
    no recurrence of order <= max_order is confirmed by ``checks`` extra
    equations inside the probe window.
    """
    P = len(terms)
    if max_order is None:
        max_order = max(1, (P - checks) // 2)
    for j0 in range(P):
        if not any(terms[j0:]):
            return j0, ()
        for s in range(1, max_order + 1):
            if j0 + 2 * s + checks > P:
                break
            rho = _solve_recurrence(terms[j0:], s)
            if rho is not None:
                return j0, rho
    raise ResummationError("resummation pattern not detected, increase P")


def _solve_recurrence(seq, s):
    rows = []
    for t in range(len(seq) - s):
        keys = set(seq[t + s])
        for i in range(s):
            keys |= set(seq[t + i])
        for mono in keys:
            row = {i: seq[t + i].get(mono, ZERO) for i in range(s)}
            row[s] = -seq[t + s].get(mono, ZERO)
            row = {a: b for a, b in row.items() if b}
            if row:
                rows.append(row)
    ns = nullspace(rows, s + 1)
    cands = [v for v in ns if v.get(s)]
    if len(ns) != 1 or not cands:
        return None
    v = cands[0]
    inv = v[s].inverse()
    rho = tuple(v.get(i, ZERO) * inv for i in range(s))
    # verify the whole window
    for t in range(len(seq) - s):
        pred = {}
        for i in range(s):
            _add_into(pred, seq[t + i], rho[i])
        if vec_add(pred, vec_scale(seq[t + s], -ONE)):
            return None
    return rho


def resum(seq, rho):
    """Formal sum of sequence seq[0], seq[1], ... obeying the recurrence rho."""
    if not rho:
        return vec_add(*seq) if seq else {}
    s = len(rho)
    denom = ONE
    for r in rho:
        denom = denom - r
    if not denom:
        raise ResummationError("recurrence has ratio 1: series diverges formally")
    acc = vec_add(*seq[:s])
    for i in range(s):
        for u in range(i):
            _add_into(acc, seq[u], -rho[i])
    return vec_scale(acc, denom.inverse())


def spectral_radius(rho, u):
    if not rho:
        return 0.0
    s = len(rho)
    comp = np.zeros((s, s), dtype=complex)
    for i in range(s - 1):
        comp[i, i + 1] = 1
    for i in range(s):
        comp[s - 1, i] = rho[i].eval_precise(u)
    return float(max(abs(np.linalg.eigvals(comp))))
