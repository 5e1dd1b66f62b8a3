"""Economic-resolution profiles and brute-force checks of the combinatorial claims
attached to the type II contractions.

For a terminal cyclic quotient ``1/r(1, -1, b)`` the economic resolution has
exceptional divisors ``F_1, ..., F_{r-1}`` whose valuations are the residue
multiples ``j * K`` of the Kawamata vector ``K``.  If the exceptional divisor
``E`` of ``f: X -> W`` is cut out near the point by ``phi`` and ``f`` has
discrepancy ``a``, then ``F_j`` has discrepancy ``a_j = (a q_j + j) / r`` over
``W``, where ``q_j = r * wt_{F_j}(phi)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .lattice import (
    QuotientLatticeSpec,
    SupportSet,
    WeightVector,
    lattice_member,
    monomial_weight,
    support_weight,
)
from .singularity import is_terminal_cyclic, kawamata_vector


# --- profiles -------------------------------------------------------------


@dataclass(frozen=True)
class EconomicProfile:
    quotient: QuotientLatticeSpec
    support: SupportSet
    vectors: tuple[WeightVector, ...]
    q_values: tuple[int, ...]
    a_values: tuple[Fraction, ...]
    discrepancy: int

    @property
    def index(self) -> int:
        return self.quotient.index

    def q(self, j: int) -> int:
        return self.q_values[j - 1]

    def a(self, j: int) -> Fraction:
        return self.a_values[j - 1]

    @property
    def integral(self) -> bool:
        return all(x.denominator == 1 for x in self.a_values)

    def discrepancy_one(self) -> list[int]:
        return [j for j, x in enumerate(self.a_values, start=1) if x == 1]

    @property
    def admissible(self) -> bool:
        return self.integral and bool(self.discrepancy_one())


def kawamata_multiple(q: QuotientLatticeSpec) -> int:
    """The residue ``c`` with ``c * generator`` reducing to the Kawamata vector."""
    k = kawamata_vector(q)
    for c in range(1, q.index):
        if q.residue_vector(c) == k:
            return c
    raise AssertionError("Kawamata vector is not a residue multiple")


def economic_vectors(q: QuotientLatticeSpec) -> list[WeightVector]:
    c = kawamata_multiple(q)
    return [q.residue_vector(j * c) for j in range(1, q.index)]


def economic_q_profile(q: QuotientLatticeSpec, phi: SupportSet, a: int = 1) -> EconomicProfile:
    if not is_terminal_cyclic(q) or q.index == 1:
        raise ValueError(f"{q} is not a terminal cyclic quotient of index > 1")
    r = q.index
    vectors = economic_vectors(q)
    qs = []
    for v in vectors:
        value = r * support_weight(v, phi)
        qs.append(int(value))
    a_values = tuple(Fraction(a * qj + j, r) for j, qj in enumerate(qs, start=1))
    return EconomicProfile(q, phi, tuple(vectors), tuple(qs), a_values, a)


def parity_residue(r: int, a: int, j: int) -> int:
    """``a_j`` mod ``a`` forced by ``r a_j = a q_j + j``: namely ``j / r`` mod ``a``."""
    return (j * pow(r, -1, a)) % a


def check_parity_law(profile: EconomicProfile, a: int) -> bool:
    """Every integral ``a_j`` satisfies ``a_j = j * r^{-1}`` (mod ``a``).

    For ``a = 2`` this is ``a_j = j`` (mod 2); for ``a = 4`` it reads
    ``a_j = -j`` (mod 4) when ``r = 3`` (mod 4) and ``a_j = j`` when ``r = 1``.
    """
    if a not in (2, 4):
        raise ValueError(f"parity law only stated for a in (2, 4), got {a}")
    r = profile.index
    for j, x in enumerate(profile.a_values, start=1):
        if x.denominator != 1:
            continue
        if int(x) % a != parity_residue(r, a, j):
            return False
    return True


# --- type II quotient data -----------------------------------------------

CYCLIC_CLAIM_CASES = {
    # case: (discrepancy a, b in 1/r(1,-1,b), r as a function of k, allowed a_1 values)
    "IIf_4k3": (2, 4, lambda k: 4 * k + 3, frozenset({1, 3})),
    "IIf_4k1": (2, 4, lambda k: 4 * k + 1, frozenset({1})),
    "IIg_8k7": (4, 8, lambda k: 8 * k + 7, frozenset({3, 7})),
    "IIg_8k5": (4, 8, lambda k: 8 * k + 5, frozenset({1, 5})),
    "IIg_8k3": (4, 8, lambda k: 8 * k + 3, frozenset({3})),
    "IIg_8k1": (4, 8, lambda k: 8 * k + 1, frozenset({1})),
}


def claim_quotient(case: str, k: int) -> QuotientLatticeSpec:
    a, b, rf, _ = CYCLIC_CLAIM_CASES[case]
    r = rf(k)
    return QuotientLatticeSpec.of(r, 1, r - 1, b)


def character_ok(q: QuotientLatticeSpec, a: int, m: Sequence[int]) -> bool:
    """Whether ``a_j`` is integral for every ``j`` when ``phi = {m}``.

    ``q_j(m)`` is congruent to ``j c chi(m)`` modulo ``r`` (``c`` the Kawamata
    multiple, ``chi`` the character), so integrality for all ``j`` reduces to
    ``a c chi(m) = -1`` (mod ``r``).
    """
    r = q.index
    c = kawamata_multiple(q)
    chi = sum(e * w for e, w in zip(m, q.generator_weights))
    return (a * c * chi + 1) % r == 0


def _monomials_of_weight(weights: Sequence[int], target: int, cap: int) -> Iterable[tuple[int, ...]]:
    """All exponent vectors with ``sum(w_i e_i) == target`` and every ``e_i <= cap``."""
    w = list(weights)

    def rec(i, remaining):
        if i == len(w) - 1:
            if w[i] == 0:
                if remaining == 0:
                    yield (0,)
                return
            if remaining % w[i] == 0 and remaining // w[i] <= cap:
                yield (remaining // w[i],)
            return
        top = cap if w[i] == 0 else min(cap, remaining // w[i])
        for e in range(top + 1):
            for rest in rec(i + 1, remaining - e * w[i]):
                yield (e,) + rest

    if target < 0:
        return iter(())
    return rec(0, target)


def _monomials_up_to_weight(weights: Sequence[int], bound: int, cap: int):
    for total in range(bound + 1):
        yield from _monomials_of_weight(weights, total, cap)


@dataclass
class ClaimReport:
    """Structured outcome of a claim check."""

    claim: str
    params: dict
    passed: bool
    witnesses: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        from .report import encode
        return encode({
            "claim": self.claim,
            "params": self.params,
            "passed": self.passed,
            "witnesses": self.witnesses,
            "counterexamples": self.counterexamples,
            "details": self.details,
        })

    @classmethod
    def from_dict(cls, doc: dict) -> "ClaimReport":
        from .report import decode
        doc = decode(doc)
        return cls(doc["claim"], doc["params"], doc["passed"], doc["witnesses"],
                   doc["counterexamples"], doc["details"])

    def __eq__(self, other):
        if not isinstance(other, ClaimReport):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def _profile_of_monomial(q, a, m):
    return economic_q_profile(q, SupportSet.of(m), a)


def a1_bound_claim(case_id: str, k: int, exponent_bound: Optional[int] = None) -> ClaimReport:
    """Check the claimed values of ``a_1`` for every admissible support.

    A support is admissible when every ``a_j`` is integral (all monomials carry
    the character of ``E``) and some ``a_j`` equals 1.  Since ``q_j`` of a set is
    the minimum over its monomials, ``a_j(S) = min a_j(m)``.  Hence the possible
    values of ``a_1(S)`` are exactly the values ``a_1(m1) <= a_1(m0)`` where
    ``m0`` runs over witness monomials (``a_j(m0) = 1`` for some ``j``) and ``m1``
    over monomials with the right character.

    Witnesses satisfy ``q_j(m0) = (r - j) / a < r``; since every residue weight
    is at least 1 their exponents are below ``r``.  Monomials relevant to the
    value set have ``q_1 <= (max_witness_a1 * r - 1) / a`` and hence exponents
    bounded by that number.  Both bounds are below ``4r``, the default
    ``exponent_bound``.
    """
    case_id = getattr(case_id, "value", case_id)
    if case_id not in CYCLIC_CLAIM_CASES:
        raise ValueError(f"no a_1 claim for case {case_id}")
    if k < 1:
        raise ValueError("k must be at least 1")
    a, _, rf, allowed = CYCLIC_CLAIM_CASES[case_id]
    q = claim_quotient(case_id, k)
    r = q.index
    cap = exponent_bound if exponent_bound is not None else 4 * r
    vectors = economic_vectors(q)

    witnesses = {}
    for j, v in enumerate(vectors, start=1):
        if (r - j) % a:
            continue
        target = (r - j) // a
        for m in _monomials_of_weight(v.numerators, target, cap):
            if character_ok(q, a, m):
                a1 = Fraction(a * int(r * monomial_weight(vectors[0], m)) + 1, r)
                witnesses.setdefault(m, (j, int(a1)))
    if not witnesses:
        return ClaimReport(f"a1:{case_id}", {"k": k, "r": r}, False,
                           details={"reason": "no admissible support exists"})
    worst = max(a1 for _, a1 in witnesses.values())
    bound_q1 = (worst * r - 1) // a
    values = set()
    for m in _monomials_up_to_weight(vectors[0].numerators, bound_q1, cap):
        if character_ok(q, a, m):
            q1 = int(r * monomial_weight(vectors[0], m))
            a1 = Fraction(a * q1 + 1, r)
            if a1 <= worst:
                values.add(int(a1))
    bad = sorted(values - allowed)
    counter = []
    if bad:
        for m, (j, a1) in sorted(witnesses.items()):
            if a1 in bad:
                counter.append({"monomial": list(m), "j": j, "a1": a1})
    witness_list = [{"monomial": list(m), "j": j, "a1": a1}
                    for m, (j, a1) in sorted(witnesses.items(), key=lambda kv: (kv[1][1], kv[0]))[:5]]
    return ClaimReport(
        f"a1:{case_id}", {"k": k, "r": r}, not bad, witness_list, counter,
        {"a1_values": sorted(values), "allowed": sorted(allowed), "max_witness_a1": worst,
         "exponent_bound": cap},
    )


def discrepancy_one_count(case_id: str, k: int, phi: SupportSet) -> int:
    a, _, _, _ = CYCLIC_CLAIM_CASES[case_id]
    return len(economic_q_profile(claim_quotient(case_id, k), phi, a).discrepancy_one())


# --- Case IIe, cA/r point -------------------------------------------------


def iie2_quotient(k: int) -> QuotientLatticeSpec:
    r = 2 * k + 1
    return QuotientLatticeSpec.of(r, 1, r - 1, 2, 0)


def iie2_germ_equation(k: int, t: int = 2) -> SupportSet:
    r = 2 * k + 1
    return SupportSet.of((1, 1, 0, 0), (0, 0, t * r, 0), (0, 0, 0, 2))


def iie2_families(k: int) -> dict[str, list[tuple[WeightVector, Fraction]]]:
    """The vectors over ``Q`` with their expected discrepancies."""
    r = 2 * k + 1
    fam = {
        "v1": [(WeightVector.of(k + 1, 3 * k + 1, 1, r, index=r), Fraction(1, r))],
        "F": [(WeightVector.of(j, 4 * k + 2 - j, 2 * j, r, index=r), Fraction(2 * j, r))
              for j in range(1, k + 1)],
        "G0": [(WeightVector.of(k + 1 + i, 3 * k + 1 - i, 2 * i + 1, r, index=r), Fraction(2 * i + 1, r))
               for i in range(1, k + 1)],
        "G1": [(WeightVector.of(r + i, r - i, 2 * i, r, index=r), Fraction(2 * i, r))
               for i in range(1, k + 1)],
        "G2": [(WeightVector.of(3 * k + 1 + i, k + 1 - i, 2 * i - 1, r, index=r), Fraction(2 * i - 1, r))
               for i in range(1, k + 1)],
    }
    return fam


def _germ_discrepancy(v: WeightVector, eq: SupportSet) -> Fraction:
    return v.total - support_weight(v, eq) - 1


def verify_vector_families(case_id: str, k: int, extra: Sequence[WeightVector] = (),
                           t: int = 2) -> ClaimReport:
    case_id = getattr(case_id, "value", case_id)
    if case_id != "IIe_cAr":
        raise ValueError(f"vector families are only listed for IIe_cAr, not {case_id}")
    if k < 1:
        raise ValueError("k must be at least 1")
    q = iie2_quotient(k)
    eq = iie2_germ_equation(k, t)
    failures = []
    checked = 0
    for name, items in iie2_families(k).items():
        for idx, (v, disc) in enumerate(items, start=1):
            checked += 1
            member = lattice_member(v, q)
            actual = _germ_discrepancy(v, eq)
            if not member or actual != disc:
                failures.append({"family": name, "i": idx, "vector": str(v), "member": member,
                                 "discrepancy": actual, "expected": disc})
    extras = []
    for v in extra:
        extras.append({"vector": str(v), "member": lattice_member(v, q)})
    return ClaimReport(f"families:{case_id}", {"k": k}, not failures, [], failures,
                       {"checked": checked, "extra": extras})


@dataclass(frozen=True)
class IIe2Profile:
    k: int
    frak_q: int
    frak_a: Fraction
    a: tuple[Fraction, ...]
    b0: tuple[Fraction, ...]
    b1: tuple[Fraction, ...]
    b2: tuple[Fraction, ...]

    @property
    def values(self) -> list[Fraction]:
        return [self.frak_a, *self.a, *self.b0, *self.b1, *self.b2]

    @property
    def integral(self) -> bool:
        return all(x.denominator == 1 for x in self.values)

    @property
    def admissible(self) -> bool:
        return self.integral and any(x == 1 for x in self.values)


def iie2_profile(k: int, phi: SupportSet) -> IIe2Profile:
    r = 2 * k + 1
    fam = iie2_families(k)

    def t(v):
        return int(r * support_weight(v, phi))

    frak_q = t(fam["v1"][0][0])
    return IIe2Profile(
        k,
        frak_q,
        Fraction(2 * frak_q + 1, r),
        tuple(Fraction(2 * t(v) + 2 * j, r) for j, (v, _) in enumerate(fam["F"], start=1)),
        tuple(Fraction(2 * t(v) + 2 * i + 1, r) for i, (v, _) in enumerate(fam["G0"], start=1)),
        tuple(Fraction(2 * t(v) + 2 * i, r) for i, (v, _) in enumerate(fam["G1"], start=1)),
        tuple(Fraction(2 * t(v) + 2 * i - 1, r) for i, (v, _) in enumerate(fam["G2"], start=1)),
    )


class InadmissibleSupport(ValueError):
    pass


def frak_a_claim_IIe2(k: int, phi: SupportSet) -> bool:
    """Replay the claim that ``frak_a = 1`` for the cA/r point of Case IIe.

    Raises :class:`InadmissibleSupport` when no exceptional divisor of
    discrepancy 1 arises.  Returns whether ``frak_a == 1``; when the witness
    of discrepancy 1 is some ``G_{2i}`` the claim additionally requires that
    ``phi`` contain ``z^k`` and ``frak_q == k``.
    """
    p = iie2_profile(k, phi)
    if not p.admissible:
        raise InadmissibleSupport(f"support {phi} admits no discrepancy-1 divisor for k={k}")
    if p.frak_a != 1:
        return False
    if any(x == 1 for x in p.b2) and all(x != 1 for x in p.b0):
        zk = (0, 0, k, 0)
        return zk in phi.monomials and p.frak_q == k
    return True


# --- closed forms ---------------------------------------------------------


def kawamata_F_cubed(r: int, c: int) -> Fraction:
    """``F^3`` for the Kawamata blowup of ``1/r(1, -1, b)`` with weights ``(c, r-c, 1)/r``."""
    return Fraction(r * r, c * (r - c))


def iic_lower_bound_holds(phi: SupportSet) -> bool:
    q = QuotientLatticeSpec.of(7, 1, 1, 6)
    prof = economic_q_profile(q, phi, 2)
    return all(prof.q(j) >= min(j, 7 - j) for j in range(1, 7))


def all_monomials(dim: int, cap: int):
    return itertools.product(range(cap + 1), repeat=dim)
