from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from mmpfactor.claims import (
    CYCLIC_CLAIM_CASES,
    ClaimReport,
    InadmissibleSupport,
    a1_bound_claim,
    all_monomials,
    check_parity_law,
    claim_quotient,
    economic_q_profile,
    frak_a_claim_IIe2,
    iic_lower_bound_holds,
    iie2_families,
    iie2_germ_equation,
    iie2_profile,
    kawamata_F_cubed,
    parity_residue,
    verify_vector_families,
)
from mmpfactor.lattice import QuotientLatticeSpec, SupportSet

CASES = sorted(CYCLIC_CLAIM_CASES)


@pytest.mark.parametrize("case", CASES)
def test_brute_force_a1_values_agree_with_claim(case):
    a, b, rf, allowed = CYCLIC_CLAIM_CASES[case]
    r = rf(1)
    brute = oracles.brute_a1_values(r, b, a, cap_single=6, cap_pair=2)
    report = a1_bound_claim(case, 1)
    assert report.passed
    assert brute <= set(report.details["a1_values"]) <= allowed


@pytest.mark.parametrize("case", CASES)
@pytest.mark.parametrize("k", [3, 6])
def test_a1_claim_holds_for_larger_k(case, k):
    assert a1_bound_claim(case, k).passed


def test_a1_claim_rejects_unknown_case_and_k():
    with pytest.raises(ValueError):
        a1_bound_claim("Ia", 1)
    with pytest.raises(ValueError):
        a1_bound_claim("IIf_4k3", 0)


@given(st.sampled_from(CASES), st.integers(1, 4), st.lists(
    st.tuples(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8)).filter(any), min_size=1, max_size=3))
@settings(max_examples=80, deadline=None)
def test_profile_matches_enumeration_and_parity(case, k, monomials):
    a, b, rf, _ = CYCLIC_CLAIM_CASES[case]
    r = rf(k)
    prof = economic_q_profile(claim_quotient(case, k), SupportSet.of(*monomials), a)
    assert list(prof.a_values) == oracles.a_profile(r, (1, r - 1, b), a, monomials)
    assert check_parity_law(prof, a)


@given(st.integers(1, 40), st.sampled_from([2, 4]), st.integers(1, 60))
def test_parity_residue_solves_congruence(r, a, j):
    if r % 2 == 0:
        return
    x = parity_residue(r, a, j)
    assert (r * x - j) % a == 0 and 0 <= x < a


def test_parity_law_for_r_3_mod_4_is_minus_j():
    # a_j = -j (mod 4) when r = 3 (mod 4)
    for r in (7, 11, 15, 23):
        assert all(parity_residue(r, 4, j) == (-j) % 4 for j in range(1, r))


def test_claim_report_round_trip():
    rep = a1_bound_claim("IIg_8k7", 1)
    assert ClaimReport.from_dict(rep.to_dict()) == rep


# --- cA/r point of Case IIe ---------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_iie2_family_discrepancies_by_direct_adjunction(k):
    r = 2 * k + 1
    eq = iie2_germ_equation(k)
    for items in iie2_families(k).values():
        for v, expected in items:
            disc = Fraction(sum(v.numerators) - oracles.eq_weight(v.numerators, eq.monomials) - r, r)
            assert disc == expected
    assert verify_vector_families("IIe_cAr", k).passed


@pytest.mark.parametrize("k", [1, 2, 3])
def test_frak_a_claim_with_z_power(k):
    assert frak_a_claim_IIe2(k, SupportSet.of((0, 0, k, 0)))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_frak_a_claim_fails_for_y(k):
    # phi = {y} is admissible (some b2 equals 1) but frak_a = 3
    p = iie2_profile(k, SupportSet.of((0, 1, 0, 0)))
    assert p.admissible and p.frak_a == 3
    assert frak_a_claim_IIe2(k, SupportSet.of((0, 1, 0, 0))) is False


def test_frak_a_claim_rejects_inadmissible_support():
    with pytest.raises(InadmissibleSupport):
        frak_a_claim_IIe2(1, SupportSet.of((1, 0, 0, 0)))


# --- closed forms ------------------------------------------------------


@pytest.mark.parametrize("r,b", [(5, 2), (7, 4), (9, 2), (11, 4)])
def test_kawamata_F_cubed_matches_cube_formula(r, b):
    kv = oracles.kawamata_point(r, (1, r - 1, b))
    nums = [int(x * r) for x in kv]
    c = nums[0]
    assert kawamata_F_cubed(r, c) == oracles.cube(nums, r)


def test_iic_lower_bound_on_single_monomials():
    assert all(iic_lower_bound_holds(SupportSet.of(m)) for m in all_monomials(3, 7) if any(m))


def test_profile_requires_terminal_quotient():
    with pytest.raises(ValueError):
        economic_q_profile(QuotientLatticeSpec.of(3, 1, 1, 1), SupportSet.of((1, 0, 0)))
