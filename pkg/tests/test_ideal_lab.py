import pytest

from qcurrent.ideal_lab import (PRINTED, PRODUCT, CommPoly, WindowError, compare_ideals,
                                difference_basis_count, graded_quotient_dims, multisets, partitions,
                                s_coefficient, s_elements)
from qcurrent.qfield import ONE, QRat, qpow


def test_pair_coefficients():
    for a, b in [(-3, 1), (-2, 0), (0, 0), (-1, -1)]:
        A = tuple(sorted((a, b)))
        if a == b:
            assert s_coefficient(A, PRODUCT) == qpow(-2 * a)
            assert s_coefficient(A, PRINTED) == QRat(2) * qpow(2 * a)
        else:
            assert s_coefficient(A, PRODUCT) == qpow(-2 * a) + qpow(-2 * b)
            assert s_coefficient(A, PRINTED) == QRat(2) * (qpow(2 * a) + qpow(2 * b))


def test_printed_s_example():
    s = s_elements(1, -2, (-3, 1), PRINTED)
    x = CommPoly.var
    expected = (x(-1) * x(-1) * (QRat(2) * qpow(-2))
                + x(0) * x(-2) * (QRat(2) * (ONE + qpow(-4)))
                + x(1) * x(-3) * (QRat(2) * (qpow(2) + qpow(-6))))
    assert s.poly == expected


def test_printed_and_product_proportional_at_level_one():
    for i in range(-6, 3):
        for A in multisets(2, i, -5, 3):
            assert s_coefficient(A, PRINTED) == QRat(2) * qpow(2 * i) * s_coefficient(A, PRODUCT)


def test_window_too_small():
    with pytest.raises(WindowError):
        s_elements(1, -8, (-3, 1))


def test_partitions_and_multisets():
    assert partitions(6, 2) == [(5, 1), (4, 2), (3, 3)]
    assert partitions(0, 0) == [()]
    assert list(multisets(2, 0, -1, 1)) == [(-1, 1), (0, 0)]


def test_level_one_charge_two_sequence():
    assert [graded_quotient_dims(1, 0, 2, d) for d in range(4, 9)] == [1, 1, 2, 2, 3]


def test_small_quotient_values():
    assert graded_quotient_dims(1, 0, 1, 1) == 1
    assert graded_quotient_dims(1, 1, 1, 1) == 0
    assert graded_quotient_dims(1, 0, 0, 0) == 1


def test_difference_counts():
    assert difference_basis_count(1, 0, 2, 6) == 2
    assert difference_basis_count(2, 0, 2, 2) == 1
    for k in (1, 2):
        assert difference_basis_count(k, 0, 0, 0) == 1
        assert difference_basis_count(k, 0, 0, 3) == 0


@pytest.mark.parametrize("k,l,D", [(1, 0, 10), (1, 1, 10), (2, 0, 7), (2, 1, 7), (2, 2, 7)])
def test_quotient_equals_difference_count(k, l, D):
    for d in range(D + 1):
        for n in range(d + 1):
            assert graded_quotient_dims(k, l, n, d) == difference_basis_count(k, l, n, d), (n, d)


def test_compare_ideals():
    assert compare_ideals(1, 0, 8).equal
    assert compare_ideals(2, 0, 6).equal
    assert compare_ideals(1, 0, -1).equal
    assert compare_ideals(2, 1, 4).tsv().startswith("charge\tenergy")


def test_level_validation():
    with pytest.raises(ValueError):
        graded_quotient_dims(1, 2, 1, 1)
