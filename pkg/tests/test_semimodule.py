import cmath

import pytest

from qcurrent.heisenberg import gamma_bar
from qcurrent.ideal_lab import graded_quotient_dims
from qcurrent.qfield import ONE, QRat, parse
from qcurrent.semimodule import (ResummationError, SemiModule, TruncationWindow, detect_recurrence,
                                 resum, verify_commutators, verify_confluence, verify_heisenberg,
                                 verify_integrability, verify_psi_exchange)

R = parse("(q^6+1)/(q^4+q^2)")
W = TruncationWindow(6, 12)


@pytest.fixture(scope="module")
def V01():
    return SemiModule(1, 0)


def test_tail_and_normalize(V01):
    assert V01.tail(1).block() == (3,)
    # x1 over T1 absorbs into the tail T0
    assert V01.normalize([1], 1) == V01.vacuum_monomial()
    m = V01.normalize([0], 1)
    assert str(m) == "x0|T1"
    assert V01.energy(m) == 1 and V01.charge(m) == 0


def test_canonicalize_examples(V01):
    assert V01.canonicalize(V01.normalize([2], 1)) == {}
    got = V01.canonicalize(V01.normalize([1, 2], 2))
    assert got == {V01.normalize([0], 1): -R}
    m = V01.normalize([0], 1)
    assert V01.canonicalize(m) == {m: ONE}


def test_canonicalize_agrees_with_rewriting(V01):
    assert verify_confluence(V01, TruncationWindow(4, 12), samples=100).passed
    assert verify_confluence(SemiModule(2, 1), TruncationWindow(3, 12), samples=60).passed


def test_act_xbar(V01):
    vac = V01.vacuum()
    assert V01.act_xbar(0, vac) == {}
    assert V01.act_xbar(-1, vac) == {V01.normalize([-1], 0): ONE}
    assert V01.act_xbar(3, {}) == {}


def test_act_a_pos(V01):
    vac = V01.vacuum()
    assert V01.act_a_pos(1, vac) == {}
    assert V01.act_a_pos(2, vac) == {}
    assert V01.act_a_pos(1, {V01.normalize([0], 1): ONE}) == {V01.vacuum_monomial(): gamma_bar(1, V01.ctx)}


def test_a0_spectrum(V01):
    assert V01.a0_eigenvalue(V01.vacuum_monomial()) == 0
    for N in range(1, 4):
        assert V01.a0_eigenvalue(V01.normalize([], N)) == -2 * N
    assert V01.a0_eigenvalue(V01.normalize([0], 1)) == 0
    with pytest.raises(ValueError):
        V01.act_a0({V01.vacuum_monomial(): ONE, V01.normalize([], 1): ONE})


def test_a_neg_closed_form(V01):
    got = V01.act_a_neg(1, V01.vacuum(), TruncationWindow(6, 12))
    g = gamma_bar(-1, V01.ctx)
    assert got == {V01.normalize([0], 1): g / (ONE + R)}
    assert V01.act_a_neg(1, {}) == {}


def test_a_neg_numeric(V01):
    q = cmath.exp(1j * cmath.pi / 6)
    num = V01.act_a_neg(1, V01.vacuum(), W, mode="numeric", q_value=q)
    exact = V01.act_a_neg(1, V01.vacuum(), W)
    for m, c in exact.items():
        assert abs(num[m] - c.eval_precise(cmath.sqrt(q))) < 1e-8


def test_a_neg_outside_convergence(V01):
    with pytest.raises(ResummationError):
        V01.act_a_neg(1, V01.vacuum(), W, mode="numeric", q_value=2.0)


def test_a_neg_independent_of_probe_depth():
    M = SemiModule(2, 0)
    a = M.act_a_neg(1, M.vacuum(), TruncationWindow(6, 12))
    b = M.act_a_neg(1, M.vacuum(), TruncationWindow(6, 18))
    assert a == b


def test_recurrence_resummation():
    # geometric sequence r^j with r = q: closed form 1/(1 - q)
    q = parse("q")
    seq = [{"x": q ** j} for j in range(8)]
    j0, rho = detect_recurrence(seq)
    assert j0 == 0 and rho == (q,)
    assert resum(seq, rho) == {"x": ONE / (ONE - q)}


def test_heisenberg_relation_on_vacuum():
    for k, l in [(1, 0), (1, 1), (2, 0), (2, 1)]:
        n_max = 2 if k == 2 else 3
        assert verify_heisenberg(SemiModule(k, l), n_max, TruncationWindow(6, 16)).passed


def test_commutators_and_integrability(V01):
    assert verify_commutators(V01, TruncationWindow(5, 12), 4).passed
    assert verify_integrability(V01, TruncationWindow(5, 12), 4).passed
    V02 = SemiModule(2, 0)
    assert verify_integrability(V02, TruncationWindow(4, 12), 3).passed


def test_integrability_control(V01):
    rep = verify_integrability(V01, TruncationWindow(2, 12), 2, factors=1)
    assert not rep.passed


def test_psi_exchange(V01):
    vac = V01.vacuum()
    psi = V01.act_psi(2, vac)
    assert psi[0] == vac and psi[1] == {}
    assert V01.psi_exchange_kernel(1)[0] == parse("q^2")
    assert verify_psi_exchange(V01, 3, TruncationWindow(3, 12), 2).passed


def test_characters(V01):
    table = V01.character(2)
    assert [table.get((0, e), 0) for e in range(3)] == [1, 1, 2]
    # top space of V_{1,1}: one vector per charge, a0 eigenvalues +1 and -1
    top = SemiModule(1, 1).character(0)
    assert top == {(-2, 0): 1, (0, 0): 1}


@pytest.mark.parametrize("k,l,D", [(1, 0, 8), (1, 1, 8), (2, 0, 5), (2, 1, 5), (2, 2, 5)])
def test_w_sector_matches_quotient(k, l, D):
    M = SemiModule(k, l)
    table = M.character(D, sector="W")
    for d in range(D + 1):
        for n in range(d + 1):
            dim = graded_quotient_dims(k, l, n, d)
            # n factors over T_0 carry charge 2n and energy d
            assert table.get((2 * n, d), 0) == dim, (n, d)
            assert M.w_dimension(n, d) == dim, (n, d)


def test_level_validation():
    with pytest.raises(ValueError):
        SemiModule(1, 2)
    with pytest.raises(ValueError):
        TruncationWindow(-1, 12)
