from math import gcd

import pytest
from hypothesis import given, strategies as st

from mmpfactor import curves
from mmpfactor.lattice import SupportSet


def milnor_delta(p: int, q: int) -> int:
    """delta of x^p + y^q from Milnor's formula 2 delta = mu + branches - 1."""
    return ((p - 1) * (q - 1) + gcd(p, q) - 1) // 2


@given(st.integers(1, 25), st.integers(1, 25))
def test_delta_of_brieskorn_curves(p, q):
    assert curves.delta(curves.plane_curve((p, 0), (0, q))) == milnor_delta(p, q)


def test_delta_small_examples():
    assert curves.delta(curves.plane_curve((2, 0), (0, 3))) == 1
    assert curves.delta(curves.plane_curve((1, 1))) == 1
    assert curves.delta(curves.plane_curve((1, 0), (0, 5))) == 0


def test_strict_transform_of_cusp_is_smooth():
    assert curves.strict_transforms(curves.plane_curve((2, 0), (0, 3))) == []


def test_strict_transform_of_tacnode():
    out = curves.strict_transforms(curves.plane_curve((2, 0), (0, 4)))
    assert [s.multiplicity() for s in out] == [2]


def test_reducedness():
    assert curves.is_reduced(curves.plane_curve((1, 1)))
    assert curves.is_reduced(curves.plane_curve((3, 0), (0, 2)))
    assert not curves.is_reduced(curves.plane_curve((2, 0)))
    assert not curves.is_reduced(curves.plane_curve((2, 2), (3, 2)))


def test_non_plane_support_rejected():
    with pytest.raises(ValueError):
        curves.as_plane_curve(SupportSet.of((1, 0, 1)))


def test_curve_measure_sums():
    pts = [curves.plane_curve((2, 0), (0, 3)), curves.plane_curve((3, 0), (0, 3))]
    assert curves.curve_measure(pts) == 1 + 3
