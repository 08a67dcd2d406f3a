import pytest

from qcurrent.funcmodel import SymPoly, VanishingSpec, duality_check, residue_pair, vanishing_subspace
from qcurrent.qfield import ONE, ZERO, QRat, qpow


def test_two_variable_level_one_generator():
    basis = vanishing_subspace(2, 2, VanishingSpec(1, 0))
    assert len(basis) == 1
    f = basis[0]
    # proportional to q^2 (t1^2 + t2^2) - (q^4 + 1) t1 t2
    ratio = f.coefficient([1, 1]) / f.coefficient([2, 0])
    assert ratio == -(qpow(4) + ONE) / qpow(2)


def test_generator_vanishes_on_shifted_diagonal():
    f = vanishing_subspace(2, 2, VanishingSpec(1, 0))[0]
    for s in (QRat(3), qpow(5) + ONE):
        assert f.evaluate([s, s * qpow(-2)]) == ZERO
        assert f.evaluate([s, s]) != ZERO


def test_origin_condition_starts_at_k_minus_l_plus_one():
    spec = VanishingSpec(1, 0)
    assert not spec.origin_applies(1) and spec.origin_applies(2)
    assert len(vanishing_subspace(1, 0, spec)) == 1


def test_residue_pairing():
    t3 = SymPoly(1, {(3,): ONE})
    assert residue_pair(t3, [-4]) == ONE
    assert residue_pair(t3, [-2]) == ZERO
    assert residue_pair(SymPoly(2, {(1, 1): ONE}), [-2, -2]) == QRat(2)
    with pytest.raises(ValueError):
        residue_pair(t3, [0])


def test_level_one_duality():
    for n in range(4):
        rep = duality_check(n, range(11))
        assert rep.passed, rep.tsv()


@pytest.mark.parametrize("l", [0, 1, 2])
def test_level_two_duality(l):
    for n in range(4):
        assert duality_check(n, range(8), 2, l).passed


def test_two_particle_dimension_law():
    # polynomial degree e = energy - 2; floor division gives 0 at e = 0, 1
    for e in range(11):
        assert len(vanishing_subspace(2, e)) == (e - 2) // 2 + 1


def test_empty_charge():
    rep = duality_check(0, range(3))
    assert [(r.energy, r.quotient_dim, r.vanishing_dim) for r in rep.rows] == [(0, 1, 1), (1, 0, 0), (2, 0, 0)]
