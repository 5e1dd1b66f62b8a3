from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from mmpfactor import curves
from mmpfactor.blowup import BlowupData
from mmpfactor.catalogue import (
    CaseId,
    ContractionDescriptor,
    Criterion,
    DiagramError,
    InvalidDescriptor,
    LinkKind,
    build_curve_diagram,
    build_diagram,
    default_support,
    ia_data,
    ia_diagram,
    iter_descriptors,
    validate_descriptor,
)
from mmpfactor.lattice import SupportSet
from mmpfactor.singularity import StepKind

D = ContractionDescriptor.of


def _cube_of(m: BlowupData) -> Fraction:
    w = m.weights
    eqs = [oracles.eq_weight(w.numerators, eq.monomials) for eq in m.center.equations]
    return oracles.cube(w.numerators, w.index, eqs)


def test_ia_2_3_diagram():
    diag = build_diagram(D("Ia", m=2, n=3))
    assert diag.discrepancies == (5, Fraction(1, 3), 3, 2)
    assert diag.quantities["T"] == Fraction(-3, 2)
    assert diag.certificate.criterion_used is Criterion.PROP_2RAY


@pytest.mark.parametrize("m,n", [(2, 3), (3, 5), (4, 7), (5, 8), (2, 9)])
def test_ia_intersections_match_formula(m, n):
    diag = build_diagram(D("Ia", m=m, n=n))
    assert diag.quantities["E^3"] == _cube_of(diag.f)
    assert diag.quantities["F^3"] == _cube_of(diag.g)


@given(st.integers(3, 40).flatmap(lambda n: st.tuples(st.integers(1, n - 1), st.just(n))))
@settings(max_examples=60, deadline=None)
def test_ia_depth_table_matches_toric_charts(mn):
    m, n = mn
    if not oracles.coprime(m, n):
        return
    diag = ia_diagram(m, n)
    data = ia_data(m, n)
    t = diag.depth_table
    assert t["X"] == oracles.smooth_blowup_chart_depth((1, m, n))
    assert t["X#"] == oracles.smooth_blowup_chart_depth((1, m - data.s, n - data.t))
    assert t["Y#"] - t["X#"] == (oracles.smooth_blowup_chart_depth((1, data.s, data.t)) if data.s else 0)
    assert t["Y"] == t["X"] - 1
    assert diag.link_kind is (LinkKind.FLOPS_ONLY if data.s == 0 else LinkKind.FLIPS_AND_FLOPS)
    assert diag.certificate.passed


@pytest.mark.parametrize("case,params", [
    ("Ib1", dict(a=3, d=2, r1=2, r2=4)),
    ("Ib1", dict(a=5, d=2, r1=3, r2=7)),
    ("Ib2", dict(a=3, d=2, r1=2, r2=4)),
    ("Ib2", dict(a=4, d=3, r1=5, r2=7)),
])
def test_ib_intersections_and_identities(case, params):
    diag = build_diagram(D(case, **params))
    q = diag.quantities
    a = params["a"]
    assert q["E^3"] == _cube_of(diag.f)
    assert q["F^3"] == _cube_of(diag.g)
    assert 1 + q["a1"] * params["r1"] == q["s1*"] * a
    assert 1 + q["a2"] * params["r2"] == q["s2*"] * a
    assert q["a1"] + q["a2"] == a
    other = params["r2"] if case == "Ib1" else params["r1"]
    assert q["T"] == Fraction(-1, other)


def test_ib_zero_weight_when_other_index_is_one():
    diag = build_diagram(D("Ib1", a=2, d=2, r1=3, r2=1), strict=False)
    assert 0 in diag.g_sharp.weights.numerators
    with pytest.raises(DiagramError) as err:
        build_diagram(D("Ib1", a=2, d=2, r1=3, r2=1))
    assert err.value.diagram is not None


@pytest.mark.parametrize("a,d", [(3, 3), (3, 5), (5, 3), (7, 5), (9, 9)])
def test_ic_intersections(a, d):
    diag = build_diagram(D("Ic", a=a, d=d))
    assert diag.quantities["E^3"] == _cube_of(diag.f)
    assert diag.quantities["F^3"] == _cube_of(diag.g)


@pytest.mark.parametrize("a,d", [(2, 2), (3, 1), (3, 4), (5, 2), (6, 3)])
def test_id_intersections(a, d):
    diag = build_diagram(D("Id", a=a, d=d))
    assert diag.quantities["E^3"] == _cube_of(diag.f)
    assert diag.quantities["F^3"] == _cube_of(diag.g)
    assert diag.g_sharp.weights.dim == 5


def test_iia_values():
    diag = build_diagram(D("IIa"))
    q = diag.quantities
    assert (q["frak_q"], q["frak_a"], q["qF^3/p^3"]) == (1, 1, Fraction(1, 30))
    assert q["F^3"] == _cube_of(diag.g)
    assert diag.discrepancies == (4, Fraction(1, 5), 3, 1)
    assert diag.depth_table == {"X": 4, "Y": 3, "Y#": 1, "X#": 0, "W": 0}


def test_type_ii_fixed_numbers():
    assert build_diagram(D("IIb")).quantities["2 l_Y.K_Y bound"] == Fraction(-1, 30)
    c = build_diagram(D("IIc")).quantities
    assert c["frak_q"] == 3 and c["qF^3/p^3"] == Fraction(1, 14)
    d = build_diagram(D("IId"))
    assert d.quantities["frak_a"] == 1 and d.quantities["qF^3/p^3"] == Fraction(1, 20)
    assert d.quantities["F^3"] == _cube_of(d.g)
    assert build_diagram(D("IIe_cD3")).quantities["qF^3/p^3"] == Fraction(1, 12)
    assert build_diagram(D("IIe_cD3_3", flags=("equation_star",))).quantities["qF^3/p^3"] == Fraction(1, 10)


@pytest.mark.parametrize("k", [1, 2, 5, 9])
def test_iie_car_cube(k):
    diag = build_diagram(D("IIe_cAr", k=k, t=2))
    assert diag.quantities["F^3"] == _cube_of(diag.g)


@pytest.mark.parametrize("case", ["IIf_4k3", "IIf_4k1", "IIg_8k7", "IIg_8k5", "IIg_8k3", "IIg_8k1"])
@pytest.mark.parametrize("k", [1, 2, 4])
def test_cyclic_type_ii_cases(case, k):
    diag = build_diagram(D(case, k=k))
    assert diag.quantities["curve bound"] < 0
    assert diag.quantities["F^3"] == _cube_of(diag.g)
    assert diag.certificate.criterion_used is Criterion.COR_2RAY2


def test_default_a1_values():
    assert build_diagram(D("IIg_8k7", k=2)).quantities["a_1"] == 7
    assert build_diagram(D("IIg_8k3", k=2)).quantities["a_1"] == 3
    assert build_diagram(D("IIf_4k3", k=2)).quantities["a_1"] == 1


def test_custom_support_checked():
    bad = D("IIf_4k3", support=SupportSet.of((1, 0, 0)), k=1)
    assert validate_descriptor(bad)
    good = D("IIf_4k3", support=default_support(CaseId.IIF_4K3, {"k": 1}), k=1)
    assert not validate_descriptor(good)


@pytest.mark.parametrize("desc,message", [
    (D("Ia", m=2, n=4), "gcd(m,n)=1 fails"),
    (D("Ia", m=3, n=2), "1 < m < n fails"),
    (D("Ic", a=2, d=3), "a odd fails"),
    (D("Ic", a=3, d=1), "d >= 3 fails"),
    (D("Ib1", a=2, d=2, r1=2, r2=2), "gcd(a,r1)=gcd(a,r2)=1 fails"),
    (D("Ib1", a=3, d=2, r1=2, r2=3), "r1+r2=da fails"),
    (D("Id", a=1, d=3), "a > 1 fails"),
    (D("IIe_cD3_3"), "IIe_cD3_3 requires the equation_star flag"),
    (D("Ia", m=2), "missing parameter n"),
])
def test_validation_messages(desc, message):
    assert message in validate_descriptor(desc)
    with pytest.raises(InvalidDescriptor):
        build_diagram(desc)


def test_descriptor_round_trip():
    d = D("IIf_4k3", support=SupportSet.of((0, 0, 3)), k=1)
    assert ContractionDescriptor.from_dict(d.to_dict()) == d


def test_diagram_to_dict_is_encoded():
    doc = build_diagram(D("Ia", m=2, n=3)).to_dict()
    assert doc["quantities"]["T"] == "-3/2"
    assert doc["f"]["discrepancy"] == "5/1"


def test_iter_descriptors_yields_valid():
    for case in CaseId:
        for d in iter_descriptors(case, 6):
            assert not validate_descriptor(d), (d, validate_descriptor(d))


# --- curve case -----------------------------------------------------------


def test_smooth_curve_is_elementary():
    assert build_curve_diagram(curves.plane_curve((1, 0), (0, 2))) is StepKind.SMOOTH_CURVE_BLOWUP


@pytest.mark.parametrize("tau", range(2, 8))
def test_curve_case_structure(tau):
    h = curves.plane_curve((tau, 0), (0, tau))
    diag = build_curve_diagram(h)
    assert diag.f.discrepancy == 1 and diag.g.discrepancy == 1
    assert diag.g.center.cls.value == "cA"
    assert diag.link_kind is LinkKind.FLOPS_ONLY
    assert diag.f_sharp.discrepancy == tau
    # the only singular point of Y is 1/(tau-1)(1,1,-1), whose depth is tau-2
    expected = oracles.toric_depth(tau - 1, (1, 1, tau - 2)) if tau > 2 else 0
    assert diag.depth_table["Y"] == diag.depth_table["Y#"] == expected == tau - 2


def test_curve_rejects_non_reduced():
    with pytest.raises(ValueError):
        build_curve_diagram(curves.plane_curve((2, 0)))
    with pytest.raises(ValueError):
        build_curve_diagram(curves.plane_curve((2, 1), (2, 3)))
