"""Acceptance criteria 1-10, one test each, all in exact arithmetic.

Each test prints a single ``criterion N: PASS|FAIL`` line (visible with or
without ``-s``) and then asserts.
"""

import itertools
import random
from fractions import Fraction
from math import gcd

import pytest

import oracles
from mmpfactor import claims, curves
from mmpfactor.catalogue import (
    CaseId,
    ContractionDescriptor,
    LinkKind,
    build_curve_diagram,
    build_diagram,
    default_support,
)
from mmpfactor.lattice import SupportSet
from mmpfactor.machine import (
    MUTATIONS,
    factorize,
    mutate,
    random_admissible_state,
    termination_certificate,
)
from mmpfactor.singularity import SingularityClass, StepKind, TransitionKind, depth_transition_check

D = ContractionDescriptor.of


@pytest.fixture
def verdict(capsys):
    def emit(n: int, problems: list, summary: str):
        line = f"criterion {n}: {'PASS' if not problems else 'FAIL'} {summary}"
        if problems:
            line += f"; {len(problems)} problems, first: {problems[0]}"
        with capsys.disabled():
            print("\n" + line)
        assert not problems, line
    return emit


def test_criterion_1_case_ia_sweep(verdict):
    problems, count = [], 0
    for n in range(3, 61):
        for m in range(2, n):
            if gcd(m, n) != 1:
                continue
            count += 1
            t, s = oracles.modular_t(m, n)
            diag = build_diagram(D("Ia", m=m, n=n))
            T = diag.quantities["T"]
            if T != Fraction(-(m + n), n) + Fraction(1, n * t) or not T < 0:
                problems.append((m, n, "T", T))
            want = (m + n, Fraction(1, n), s + t, m + n - s - t)
            if diag.discrepancies != want:
                problems.append((m, n, "discrepancies", diag.discrepancies, want))
            if not all(0 < x < m + n for x in (s + t, m + n - s - t)):
                problems.append((m, n, "range", s + t))
    verdict(1, problems, f"{count} coprime pairs 1 < m < n <= 60")


def _ib_tuples(bound):
    for a in range(2, bound + 1):
        for d in range(1, bound // a + 1):
            for r1 in range(1, d * a):
                r2 = d * a - r1
                if gcd(a, r1) == 1 and gcd(a, r2) == 1:
                    yield a, d, r1, r2


def test_criterion_2_case_ib_sweep(verdict):
    problems, count, zero_other_index_one = [], 0, 0
    for a, d, r1, r2 in _ib_tuples(120):
        for case, r_blown, r_other in (("Ib1", r1, r2), ("Ib2", r2, r1)):
            if r_blown == 1:
                continue  # the blown-up point must be non-Gorenstein
            count += 1
            diag = build_diagram(D(case, a=a, d=d, r1=r1, r2=r2), strict=False)
            q = diag.quantities
            if not (1 + q["a1"] * r1 == q["s1*"] * a and 1 + q["a2"] * r2 == q["s2*"] * a
                    and q["a1"] + q["a2"] == a):
                problems.append((case, a, d, r1, r2, "identities"))
            entries = [x for v in diag.weights().values() for x in v.numerators]
            if not all(isinstance(x, int) and x > 0 for x in entries):
                problems.append((case, a, d, r1, r2, "weights", {k: str(v) for k, v in diag.weights().items()}))
                zero_other_index_one += r_other == 1
    verdict(2, problems, f"{count} Ib diagrams with da <= 120 "
                         f"({zero_other_index_one} weight failures have the other point of index 1)")


def test_criterion_3_case_ic_sweep(verdict):
    problems, count = [], 0
    for a in range(3, 402, 2):
        for d in range(3, 402, 2):
            r = (a * d - 1) // 2
            if r > 200:
                continue
            count += 1
            diag = build_diagram(D("Ic", a=a, d=d))
            q = diag.quantities
            want = {
                "E^3": Fraction(2 * r + 1, a * r * (r + 1)),
                "F^3": Fraction(r * r, d * (r - d)),
                "frak_q": r - d,
            }
            for k, v in want.items():
                if q[k] != v:
                    problems.append((a, d, k, q[k], v))
            if diag.f_sharp.discrepancy != a - 2 or q["frak_a"] != a - 2:
                problems.append((a, d, "induced discrepancy", diag.f_sharp.discrepancy))
            if not q["T"] < 0:
                problems.append((a, d, "T", q["T"]))
    verdict(3, problems, f"{count} Ic diagrams with r <= 200")


def test_criterion_4_case_id_sweep(verdict):
    problems, count = [], 0
    for a in range(2, 201):
        for d in range(1, 200 // a + 1):
            r = a * d - 1
            if r < 2:
                continue
            count += 1
            q = build_diagram(D("Id", a=a, d=d)).quantities
            T = Fraction(1, r + 2) * (-(2 * r + 2) + Fraction(2 * d, r - d + 2))
            if q["frak_q"] != d or q["frak_a"] != 1:
                problems.append((a, d, "frak", q["frak_q"], q["frak_a"]))
            if (q["c0"], q["q0"]) != (r, 2 * d) or not r - a * 2 * d < 0:
                problems.append((a, d, "c0,q0", q["c0"], q["q0"]))
            if q["T"] != T or not T < 0:
                problems.append((a, d, "T", q["T"], T))
    verdict(4, problems, f"{count} Id diagrams with ad <= 200")


def test_criterion_5_fixed_number_cases(verdict):
    problems = []

    def expect(label, got, want):
        if got != want:
            problems.append((label, got, want))

    iia = build_diagram(D("IIa")).quantities
    expect("IIa frak_q", iia["frak_q"], 1)
    expect("IIa frak_a", iia["frak_a"], 1)
    expect("IIa qF^3/p^3", iia["qF^3/p^3"], Fraction(1, 30))

    iib = build_diagram(D("IIb")).quantities
    bound = Fraction(-2, 15) + Fraction(2, 20)
    expect("IIb bound", iib["2 l_Y.K_Y bound"], bound)
    expect("IIb bound value", bound, Fraction(-1, 30))
    expect("IIb bound negative", bound < 0, True)

    iic = build_diagram(D("IIc"))
    expect("IIc frak_q", iic.quantities["frak_q"], 3)
    expect("IIc qF^3/p^3", iic.quantities["qF^3/p^3"], Fraction(1, 14))
    expect("IIc 1/14 < 1/7", iic.quantities["qF^3/p^3"] < Fraction(1, 7), True)
    singles = [m for m in claims.all_monomials(3, 7) if any(m)]
    pairs = [SupportSet.of(x, y) for x, y in itertools.combinations([m for m in singles if max(m) <= 3], 2)]
    supports = [SupportSet.of(m) for m in singles] + pairs
    bad = [s for s in supports if not claims.iic_lower_bound_holds(s)]
    expect("IIc q_j >= min(j, 7-j)", bad, [])

    iid = build_diagram(D("IId")).quantities
    expect("IId frak_a", iid["frak_a"], Fraction(1 + 3 * iid["frak_q"], 4))
    expect("IId frak_a = 1", iid["frak_a"], 1)
    expect("IId qF^3/p^3", iid["qF^3/p^3"], Fraction(1, 20))
    expect("IId 1/20 < 1/4", iid["qF^3/p^3"] < Fraction(1, 4), True)

    expect("IIe cD/3 generic", build_diagram(D("IIe_cD3")).quantities["qF^3/p^3"], Fraction(1, 12))
    expect("IIe cD/3-3", build_diagram(D("IIe_cD3_3", flags=("equation_star",))).quantities["qF^3/p^3"],
           Fraction(1, 10))
    for case in ("IIa", "IIb", "IIc", "IId", "IIe_cD3"):
        if not build_diagram(D(case)).certificate.passed:
            problems.append((case, "certificate"))
    verdict(5, problems, f"IIa, IIb, IIc ({len(supports)} supports), IId, IIe cD/3")


def test_criterion_6_claim_oracles(verdict):
    problems, seen, profiles = [], {}, 0
    for case, (a, _, _, allowed) in sorted(claims.CYCLIC_CLAIM_CASES.items()):
        k_max = 15 if case.startswith("IIf") else 10
        seen[case] = set()
        for k in range(1, k_max + 1):
            rep = claims.a1_bound_claim(case, k)
            seen[case] |= set(rep.details["a1_values"])
            if not rep.passed:
                problems.append((case, k, rep.details["a1_values"]))
            q = claims.claim_quotient(case, k)
            supports = [default_support(CaseId(case), {"k": k})]
            supports += [SupportSet.of(tuple(w["monomial"])) for w in rep.witnesses]
            supports += [SupportSet.of(m) for m in claims.all_monomials(3, 3) if any(m)]
            for phi in supports:
                profiles += 1
                if not claims.check_parity_law(claims.economic_q_profile(q, phi, a), a):
                    problems.append((case, k, "parity", str(phi)))
        if seen[case] != set(allowed):
            problems.append((case, "value set", sorted(seen[case]), sorted(allowed)))
    # r = 8k+1 forces a_1 = 1, hence f# has discrepancy 1 and not 3
    f_sharp = build_diagram(D("IIg_8k1", k=1)).f_sharp.discrepancy
    if f_sharp != 1:
        problems.append(("IIg_8k1", "f# discrepancy", f_sharp))
    summary = ", ".join(f"{c} {sorted(v)}" for c, v in seen.items())
    verdict(6, problems, f"a1 values {summary}; parity on {profiles} profiles; IIg_8k1 f# discrepancy is a1 = 1, not 3")


def test_criterion_7_case_iie_car(verdict):
    problems = []
    for k in range(1, 31):
        if not claims.verify_vector_families("IIe_cAr", k).passed:
            problems.append((k, "families"))
        q = build_diagram(D("IIe_cAr", k=k, t=2)).quantities["qF^3/p^3"]
        want = Fraction(2 * k, (k + 1) * (3 * k + 1) * (2 * k + 1))
        if q != want or not q < Fraction(1, 2 * k + 1):
            problems.append((k, "qF^3/p^3", q, want))
        phi = default_support(CaseId.IIE_CAR, {"k": k, "t": 2})
        if not claims.iie2_profile(k, phi).admissible or not claims.frak_a_claim_IIe2(k, phi):
            problems.append((k, "frak_a", str(phi)))
    verdict(7, problems, "k = 1..30")


def test_criterion_8_curve_case(verdict):
    problems = []
    germs = [(tau, curves.plane_curve((tau, 0), (0, tau))) for tau in range(2, 11)]
    germs.append((2, curves.plane_curve((2, 0), (0, 3))))
    for tau, h in germs:
        diag = build_curve_diagram(h)
        if diag.g.discrepancy != 1 or diag.g.center.cls is not SingularityClass.CA:
            problems.append((str(h), "g", diag.g.discrepancy))
        if diag.link_kind is not LinkKind.FLOPS_ONLY:
            problems.append((str(h), "link", diag.link_kind))
        ends = (diag.depth_table["Y"], diag.depth_table["Y#"])
        if ends != (tau - 1, tau - 1):
            problems.append((str(h), "link-end depths", ends, "expected", (tau - 1, tau - 1)))
    verdict(8, problems, f"{len(germs)} curve germs")


@pytest.fixture(scope="module")
def random_traces():
    rng = random.Random(20261019)
    out = []
    for _ in range(200):
        s = random_admissible_state(rng, max_depth=6, max_a=12)
        out.append((s, factorize(s, rng)))
    return out


def test_criterion_9_factorization_machine(verdict, random_traces):
    problems, mutants = [], 0
    rng = random.Random(99)
    whitelist = set(StepKind)
    for s, t in random_traces:
        rep = termination_certificate(t)
        if not rep.valid:
            problems.append((str(s), [v.to_dict() for v in rep.violations][:2]))
        stray = [x for x in t.leaves() if x not in whitelist]
        if stray:
            problems.append((str(s), "leaves", stray))
        for how in MUTATIONS:
            bad, what = mutate(t, rng, how)
            mutants += 1
            if termination_certificate(bad).valid:
                problems.append((str(s), "undetected mutation", what))
    height = max(t.height() for _, t in random_traces)
    verdict(9, problems, f"200 states, max height {height}, {mutants} mutants all detected")


def test_criterion_10_depth_rules(verdict, random_traces):
    problems, edges = [], 0
    for s, t in random_traces:
        for path, _, e, _ in t.edges():
            edges += 1
            if not depth_transition_check(e.kind, e.before, e.after):
                problems.append((str(s), path, e.kind.value, e.before, e.after))
    rng = random.Random(10 ** 4)
    kinds = list(TransitionKind)
    for _ in range(10 ** 4):
        kind, before, after = rng.choice(kinds), rng.randint(-1, 15), rng.randint(-1, 15)
        if depth_transition_check(kind, before, after) != oracles.depth_rule(kind.value, before, after):
            problems.append(("random", kind.value, before, after))
    verdict(10, problems, f"{edges} trace edges and 10^4 random edges")
