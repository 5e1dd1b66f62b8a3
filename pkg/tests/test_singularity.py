import pytest
from hypothesis import given, strategies as st

import oracles
from mmpfactor.lattice import QuotientLatticeSpec, SupportSet
from mmpfactor.singularity import (
    DepthState,
    PointGerm,
    SingularityClass,
    TransitionKind,
    depth_of_cyclic_quotient,
    depth_transition_check,
    is_terminal_cyclic,
    kawamata_vector,
)


@given(st.integers(2, 23), st.integers(0, 22), st.integers(0, 22), st.integers(0, 22))
def test_terminal_test_matches_reid_tai(r, a, b, c):
    q = QuotientLatticeSpec.of(r, a, b, c)
    assert is_terminal_cyclic(q) == oracles.reid_tai_terminal(r, (a % r, b % r, c % r))


@pytest.mark.parametrize("r,b", [(2, 1), (3, 1), (5, 2), (7, 3), (7, 4), (9, 4), (11, 8), (13, 5)])
def test_depth_matches_toric_resolution(r, b):
    q = QuotientLatticeSpec.of(r, 1, r - 1, b)
    assert depth_of_cyclic_quotient(q) == oracles.toric_depth(r, (1, r - 1, b)) == r - 1


@given(st.integers(2, 40).flatmap(lambda r: st.tuples(st.just(r), st.integers(1, r - 1))))
def test_kawamata_vector_matches_enumeration(rb):
    r, b = rb
    if not oracles.coprime(r, b):
        return
    q = QuotientLatticeSpec.of(r, 1, r - 1, b)
    assert kawamata_vector(q).entries == oracles.kawamata_point(r, (1, r - 1, b))


def test_non_terminal_rejected():
    with pytest.raises(ValueError):
        depth_of_cyclic_quotient(QuotientLatticeSpec.of(3, 1, 1, 1))


def test_depth_state_sums_and_validates():
    p = PointGerm.cyclic(5, 1, 4, 2)
    s = DepthState.from_quotients([p, PointGerm.cyclic(2, 1, 1, 1)])
    assert s.depth == 5
    with pytest.raises(ValueError):
        DepthState(((PointGerm.smooth(), 1),))


def test_point_germ_round_trip():
    g = PointGerm.hypersurface(SingularityClass.CA, SupportSet.of((1, 1, 0, 0), (0, 0, 3, 0), (0, 0, 0, 6)))
    assert PointGerm.from_dict(g.to_dict()) == g
    with pytest.raises(ValueError):
        PointGerm(SingularityClass.CA, QuotientLatticeSpec.trivial(3), (SupportSet.of((1, 1, 0, 0)),))


def test_depth_rule_examples():
    assert depth_transition_check(TransitionKind.FLIP, 3, 2)
    assert not depth_transition_check(TransitionKind.FLIP, 2, 2)
    assert depth_transition_check(TransitionKind.FLOP, 2, 2)
    assert not depth_transition_check(TransitionKind.FLOP, 2, 1)
    assert depth_transition_check(TransitionKind.DIV_TO_CURVE, 0, 0)
    assert not depth_transition_check(TransitionKind.DIV_TO_CURVE, 1, 1)
    assert depth_transition_check(TransitionKind.DIV_TO_POINT, 2, 3)
    assert not depth_transition_check(TransitionKind.DIV_TO_POINT, 2, 4)
    assert not depth_transition_check(TransitionKind.DIV_TO_POINT, -1, 0)
