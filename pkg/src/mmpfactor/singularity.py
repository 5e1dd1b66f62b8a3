"""Terminal 3-fold point germs, the depth invariant and its transition rules."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Optional, Sequence

from .lattice import QuotientLatticeSpec, SupportSet, WeightVector


class SingularityClass(Enum):
    SMOOTH = "Smooth"
    CA = "cA"
    CA_OVER_R = "cA/r"
    CAX_OVER_4 = "cAx/4"
    CD = "cD"
    CD3_SUB1 = "cD/3-1"
    CD3_SUB2 = "cD/3-2"
    CD3_SUB3 = "cD/3-3"
    CE6 = "cE6"
    CE7 = "cE7"
    CE8 = "cE8"
    CE_OVER_2 = "cE/2"
    CYCLIC_QUOTIENT = "CyclicQuotient"

    @property
    def is_cD3(self) -> bool:
        return self in (SingularityClass.CD3_SUB1, SingularityClass.CD3_SUB2, SingularityClass.CD3_SUB3)

    @property
    def is_cE(self) -> bool:
        return self in (SingularityClass.CE6, SingularityClass.CE7, SingularityClass.CE8)

    @property
    def gorenstein(self) -> bool:
        return self in (SingularityClass.SMOOTH, SingularityClass.CA, SingularityClass.CD) or self.is_cE


class TransitionKind(Enum):
    """Birational maps whose depth behaviour is constrained."""

    FLIP = "Flip"
    FLOP = "Flop"
    DIV_TO_CURVE = "DivToCurve"
    DIV_TO_POINT = "DivToPoint"


class StepKind(Enum):
    """The elementary maps a factorization may end in."""

    MIN_DISCREPANCY_POINT_CONTRACTION = "MinDiscrepancyPointContraction"
    SMOOTH_CURVE_BLOWUP = "SmoothCurveBlowup"
    FLOP = "Flop"


@dataclass(frozen=True)
class PointGerm:
    """A point germ ``(f_1 = ... = f_k = 0) in C^{3+k} / quotient``."""

    cls: SingularityClass
    quotient: QuotientLatticeSpec
    equations: tuple[SupportSet, ...] = ()

    def __post_init__(self):
        eqs = tuple(self.equations)
        object.__setattr__(self, "equations", eqs)
        if len(eqs) > 2:
            raise ValueError(f"at most two equations supported, got {len(eqs)}")
        dim = 3 + len(eqs)
        if self.quotient.dim != dim:
            raise ValueError(
                f"quotient {self.quotient} acts on C^{self.quotient.dim}, germ lives in C^{dim}"
            )
        for eq in eqs:
            if eq.ambient_dim != dim:
                raise ValueError(f"equation {eq} is not in C^{dim}")
            if not eq.monomials:
                raise ValueError("empty defining equation")

    @property
    def index(self) -> int:
        return self.quotient.index

    @property
    def ambient_dim(self) -> int:
        return 3 + len(self.equations)

    @classmethod
    def smooth(cls) -> "PointGerm":
        return cls(SingularityClass.SMOOTH, QuotientLatticeSpec.trivial(3))

    @classmethod
    def cyclic(cls, r: int, *weights: int) -> "PointGerm":
        kind = SingularityClass.SMOOTH if r == 1 else SingularityClass.CYCLIC_QUOTIENT
        return cls(kind, QuotientLatticeSpec.of(r, *weights))

    @classmethod
    def hypersurface(cls, kind: SingularityClass, equation: SupportSet,
                     quotient: Optional[QuotientLatticeSpec] = None) -> "PointGerm":
        q = quotient or QuotientLatticeSpec.trivial(4)
        return cls(kind, q, (equation,))

    def to_dict(self) -> dict:
        return {
            "class": self.cls.value,
            "quotient": {"index": self.index, "weights": list(self.quotient.generator_weights)},
            "equations": [sorted(list(m) for m in eq.monomials) for eq in self.equations],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "PointGerm":
        q = doc["quotient"]
        eqs = doc.get("equations", [])
        dim = len(q["weights"])
        return cls(
            SingularityClass(doc["class"]),
            QuotientLatticeSpec(int(q["index"]), tuple(q["weights"])),
            tuple(SupportSet.from_iterable(eq, dim) for eq in eqs),
        )

    def __str__(self):
        eqs = "; ".join(str(e) for e in self.equations)
        return f"{self.cls.value} in C^{self.ambient_dim}/{self.quotient}" + (f" : {eqs}" if eqs else "")


def terminal_normal_form(q: QuotientLatticeSpec) -> Optional[tuple[int, int]]:
    """Return ``(u, a)`` with ``u * weights`` a permutation of ``(1, a, r - a)``.

    ``None`` when the 3-dimensional quotient is not a terminal cyclic quotient.
    """
    r = q.index
    if q.dim != 3:
        return None
    if r == 1:
        return (1, 0)
    w = q.generator_weights
    for i in range(3):
        if gcd(w[i], r) != 1:
            continue
        u = pow(w[i], -1, r)
        a, b = ((u * w[j]) % r for j in range(3) if j != i)
        if (a + b) % r == 0 and gcd(a, r) == 1:
            return (u, min(a, b))
    return None


def is_terminal_cyclic(q: QuotientLatticeSpec) -> bool:
    return terminal_normal_form(q) is not None


def kawamata_vector(q: QuotientLatticeSpec) -> WeightVector:
    """The unique lattice vector in ``(0,1)^3`` of total weight ``1 + 1/r``."""
    if not is_terminal_cyclic(q) or q.index == 1:
        raise ValueError(f"{q} is not a terminal cyclic quotient of index > 1")
    r = q.index
    target = r + 1
    found = [q.residue_vector(c) for c in range(1, r) if sum(q.residue_vector(c).numerators) == target]
    if len(found) != 1:
        raise ValueError(f"expected a unique Kawamata vector for {q}, found {found}")
    return found[0]


def depth_of_cyclic_quotient(q: QuotientLatticeSpec) -> int:
    """Depth ``r - 1`` of a terminal cyclic quotient point of index ``r``."""
    if q.index == 1:
        return 0
    if not is_terminal_cyclic(q):
        raise ValueError(f"{q} is not a terminal cyclic quotient")
    return q.index - 1


@dataclass(frozen=True)
class DepthState:
    """Depth of a variety, attributed point by point."""

    attribution: tuple[tuple[PointGerm, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        attr = tuple((g, int(d)) for g, d in self.attribution)
        object.__setattr__(self, "attribution", attr)
        for germ, d in attr:
            if d < 0:
                raise ValueError("negative depth contribution")
            if germ.index == 1 and d != 0:
                raise ValueError(f"Gorenstein point {germ} cannot contribute depth {d}")
            if germ.index > 1 and d == 0:
                raise ValueError(f"non-Gorenstein point {germ} must contribute positive depth")

    @classmethod
    def from_quotients(cls, germs: Sequence[PointGerm]) -> "DepthState":
        return cls(tuple((g, depth_of_cyclic_quotient(g.quotient)) for g in germs))

    @property
    def depth(self) -> int:
        return sum(d for _, d in self.attribution)


def depth_transition_check(kind: TransitionKind, before: int, after: int) -> bool:
    """Depth rule for a map from a variety of depth ``before`` to one of depth ``after``.

    For divisorial contractions ``before`` is the depth of the source ``X`` and
    ``after`` that of the target ``W``.
    """
    kind = TransitionKind(kind)
    if before < 0 or after < 0:
        return False
    if kind is TransitionKind.FLIP:
        return before > after
    if kind is TransitionKind.FLOP:
        return before == after
    if kind is TransitionKind.DIV_TO_CURVE:
        return before > after or before == after == 0
    return before + 1 >= after
