"""Factoring diagrams for the divisorial contractions to Gorenstein points with
non-minimal discrepancy, and for blowups of singular lci curves.

Each case turns a small set of integer parameters into the diagram

    Y  - - ->  Y#
    |g          |g#
    X           X#
      \\f      /f#
         W

with the weights of every weighted blowup the case makes explicit, the
intersection data feeding the nef test, and a certificate listing each
identity and inequality that was checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Iterator, Mapping, Optional, Union

from . import claims, curves
from .blowup import (
    BlowupData,
    CurveClass,
    F_correction,
    IntersectionData,
    T_full,
    T_two_ray,
    chart,
    curve_negativity,
    eliminate_linear,
    induced_discrepancy,
    pullback_mult,
    small_F_check,
    weighted_blowup,
)
from .lattice import QuotientLatticeSpec, SupportSet, WeightVector, lattice_member, minimal_modular_inverse
from .report import encode, fmt
from .singularity import (
    PointGerm,
    SingularityClass,
    StepKind,
    TransitionKind,
    depth_of_cyclic_quotient,
    depth_transition_check,
    is_terminal_cyclic,
)


class CaseId(Enum):
    CURVE_LCI = "CurveLCI"
    IA = "Ia"
    IB1 = "Ib1"
    IB2 = "Ib2"
    IC = "Ic"
    ID = "Id"
    IIA = "IIa"
    IIB = "IIb"
    IIC = "IIc"
    IID = "IId"
    IIE_CD3 = "IIe_cD3"
    IIE_CD3_3 = "IIe_cD3_3"
    IIE_CAR = "IIe_cAr"
    IIF_4K3 = "IIf_4k3"
    IIF_4K1 = "IIf_4k1"
    IIG_8K7 = "IIg_8k7"
    IIG_8K5 = "IIg_8k5"
    IIG_8K3 = "IIg_8k3"
    IIG_8K1 = "IIg_8k1"


class LinkKind(Enum):
    FLOPS_ONLY = "FlopsOnly"
    FLIPS_AND_FLOPS = "FlipsAndFlops"
    IDENTITY = "Identity"


class Criterion(Enum):
    """Which two-ray criterion certifies the diagram.

    ``PROP_2RAY``: ``-K_{Y/W}`` nef together with a K-negative curve;
    ``COR_2RAY2``: every curve of ``S cap E`` stays K-non-positive and ``T(f,g) < 0``;
    ``COR_2RAY3``: ``Q`` is the only non-Gorenstein point on ``E`` and
    ``q F^3 / p^3 < 1 / p``.
    """

    PROP_2RAY = "Prop2ray"
    COR_2RAY2 = "Cor2ray2"
    COR_2RAY3 = "Cor2ray3"


PARAM_NAMES = {
    CaseId.CURVE_LCI: (),
    CaseId.IA: ("m", "n"),
    CaseId.IB1: ("a", "d", "r1", "r2"),
    CaseId.IB2: ("a", "d", "r1", "r2"),
    CaseId.IC: ("a", "d"),
    CaseId.ID: ("a", "d"),
    CaseId.IIA: (),
    CaseId.IIB: (),
    CaseId.IIC: (),
    CaseId.IID: (),
    CaseId.IIE_CD3: (),
    CaseId.IIE_CD3_3: (),
    CaseId.IIE_CAR: ("k", "t"),
    CaseId.IIF_4K3: ("k",),
    CaseId.IIF_4K1: ("k",),
    CaseId.IIG_8K7: ("k",),
    CaseId.IIG_8K5: ("k",),
    CaseId.IIG_8K3: ("k",),
    CaseId.IIG_8K1: ("k",),
}

OPTIONAL_PARAMS = {CaseId.IC: ("r",), CaseId.ID: ("r",), CaseId.CURVE_LCI: ("tau",)}

KNOWN_FLAGS = {"equation_star"}


@dataclass(frozen=True)
class ContractionDescriptor:
    case_id: CaseId
    param_items: tuple[tuple[str, int], ...] = ()
    support: Optional[SupportSet] = None
    flags: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "case_id", CaseId(self.case_id))
        items = self.param_items
        if isinstance(items, Mapping):
            items = items.items()
        object.__setattr__(self, "param_items", tuple(sorted((str(k), int(v)) for k, v in items)))
        object.__setattr__(self, "flags", frozenset(self.flags))

    @classmethod
    def of(cls, case, support: Optional[SupportSet] = None, flags=(), **params) -> "ContractionDescriptor":
        return cls(CaseId(case), tuple(params.items()), support, frozenset(flags))

    @property
    def params(self) -> dict:
        return dict(self.param_items)

    def __getitem__(self, name: str) -> int:
        return self.params[name]

    def sort_key(self):
        return (list(CaseId).index(self.case_id), self.param_items,
                sorted(self.support.monomials) if self.support else [], sorted(self.flags))

    def to_dict(self) -> dict:
        doc = {"case": self.case_id.value, "params": self.params}
        if self.support is not None:
            doc["support"] = [list(m) for m in self.support]
        if self.flags:
            doc["flags"] = sorted(self.flags)
        return doc

    @classmethod
    def from_dict(cls, doc: Mapping) -> "ContractionDescriptor":
        case = CaseId(doc["case"])
        params = {str(k): int(v) for k, v in dict(doc.get("params", {})).items()}
        support = None
        if doc.get("support") is not None:
            monos = [tuple(int(e) for e in m) for m in doc["support"]]
            if not monos:
                raise ValueError("support must not be empty")
            dim = len(monos[0])
            if case is CaseId.CURVE_LCI and dim == 2:
                monos = [m + (0,) for m in monos]
                dim = 3
            support = SupportSet.from_iterable(monos, dim)
        return cls(case, tuple(params.items()), support, frozenset(doc.get("flags", ())))

    def __str__(self):
        ps = ", ".join(f"{k}={v}" for k, v in self.param_items)
        extra = f" support={self.support}" if self.support is not None else ""
        return f"{self.case_id.value}({ps}){extra}"


@dataclass(frozen=True)
class AbstractContraction:
    """A divisorial contraction known only through its discrepancy and centre.

    ``discrepancy`` is ``None`` when the construction does not determine it.
    """

    discrepancy: Optional[Fraction]
    center_index: int
    center: str = "point"
    note: str = ""

    def to_dict(self) -> dict:
        return encode({"abstract": True, "discrepancy": self.discrepancy,
                       "center_index": self.center_index, "center": self.center, "note": self.note})


@dataclass(frozen=True)
class Check:
    name: str
    value: object
    passed: bool

    def to_dict(self) -> dict:
        return encode({"name": self.name, "value": self.value, "passed": self.passed})


@dataclass
class VerificationCertificate:
    criterion_used: Criterion
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, value, passed: bool):
        self.checks.append(Check(name, value, bool(passed)))

    def to_dict(self) -> dict:
        return {"criterion": self.criterion_used.value, "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks]}


MapData = Union[BlowupData, AbstractContraction]


def _map_dict(m: MapData) -> dict:
    if isinstance(m, AbstractContraction):
        return m.to_dict()
    return encode({
        "center": m.center.to_dict(),
        "weights": str(m.weights),
        "discrepancy": m.discrepancy,
    })


def discrepancy_of(m: MapData) -> Optional[Fraction]:
    return m.discrepancy


@dataclass
class FactoringDiagram:
    descriptor: ContractionDescriptor
    f: MapData
    g: MapData
    f_sharp: MapData
    g_sharp: MapData
    link_kind: LinkKind
    intersections: Optional[IntersectionData]
    certificate: VerificationCertificate
    quantities: dict = field(default_factory=dict)
    depth_table: Optional[dict] = None
    notes: list = field(default_factory=list)

    @property
    def case_id(self) -> CaseId:
        return self.descriptor.case_id

    @property
    def discrepancies(self) -> tuple:
        return tuple(discrepancy_of(m) for m in (self.f, self.g, self.g_sharp, self.f_sharp))

    def weights(self) -> dict:
        out = {}
        for name, m in (("w1", self.f), ("w2", self.g), ("w1'", self.f_sharp), ("w2'", self.g_sharp)):
            if isinstance(m, BlowupData):
                out[name] = m.weights
        return out

    def to_dict(self) -> dict:
        doc = {
            "descriptor": self.descriptor.to_dict(),
            "f": _map_dict(self.f),
            "g": _map_dict(self.g),
            "f_sharp": _map_dict(self.f_sharp),
            "g_sharp": _map_dict(self.g_sharp),
            "link_kind": self.link_kind.value,
            "quantities": encode(self.quantities),
            "certificate": self.certificate.to_dict(),
            "notes": list(self.notes),
        }
        if self.depth_table is not None:
            doc["depths"] = dict(self.depth_table)
        return doc

    def text(self) -> str:
        lines = [f"case {self.descriptor}"]
        for name, m in (("f", self.f), ("g", self.g), ("g#", self.g_sharp), ("f#", self.f_sharp)):
            if isinstance(m, BlowupData):
                lines.append(f"  {name:3} weights {m.weights}  discrepancy {fmt(m.discrepancy)}")
            else:
                d = "?" if m.discrepancy is None else fmt(m.discrepancy)
                lines.append(f"  {name:3} {m.center} contraction, centre index {m.center_index}, discrepancy {d}")
        lines.append(f"  link {self.link_kind.value}")
        for k, v in self.quantities.items():
            lines.append(f"  {k} = {fmt(v)}")
        if self.depth_table:
            lines.append("  depths " + ", ".join(f"{k}={v}" for k, v in self.depth_table.items()))
        lines.append(f"  criterion {self.certificate.criterion_used.value}: "
                     + ("passed" if self.certificate.passed else "FAILED"))
        for c in self.certificate.checks:
            lines.append(f"    [{'ok' if c.passed else 'FAIL'}] {c.name} = {fmt(c.value)}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)


class DiagramError(ValueError):
    def __init__(self, message: str, diagram: Optional[FactoringDiagram] = None):
        super().__init__(message)
        self.diagram = diagram


# --- validation -----------------------------------------------------------


def _odd(x: int) -> bool:
    return x % 2 == 1


def validate_descriptor(d: ContractionDescriptor) -> list[str]:
    case = d.case_id
    p = d.params
    out = []
    required = PARAM_NAMES[case]
    for name in required:
        if name not in p:
            out.append(f"missing parameter {name}")
    allowed = set(required) | set(OPTIONAL_PARAMS.get(case, ()))
    for name in p:
        if name not in allowed:
            out.append(f"unexpected parameter {name}")
    for fl in d.flags:
        if fl not in KNOWN_FLAGS:
            out.append(f"unknown flag {fl}")
    if out:
        return out

    if case is CaseId.IA:
        m, n = p["m"], p["n"]
        if not 1 < m < n:
            out.append("1 < m < n fails")
        if gcd(m, n) != 1:
            out.append("gcd(m,n)=1 fails")
    elif case in (CaseId.IB1, CaseId.IB2):
        a, dd, r1, r2 = p["a"], p["d"], p["r1"], p["r2"]
        if min(a, dd, r1, r2) < 1:
            out.append("a, d, r1, r2 positive fails")
            return out
        if r1 + r2 != dd * a:
            out.append("r1+r2=da fails")
        if gcd(a, r1) != 1 or gcd(a, r2) != 1:
            out.append("gcd(a,r1)=gcd(a,r2)=1 fails")
        if a < 2:
            out.append("a > 1 fails")
        if case is CaseId.IB1 and r1 <= 1:
            out.append("r1 > 1 fails")
        if case is CaseId.IB2 and r2 <= 1:
            out.append("r2 > 1 fails")
    elif case is CaseId.IC:
        a, dd = p["a"], p["d"]
        if not _odd(a):
            out.append("a odd fails")
        if not _odd(dd):
            out.append("d odd fails")
        if a <= 1:
            out.append("a > 1 fails")
        if dd < 3:
            out.append("d >= 3 fails")
        if "r" in p and 2 * p["r"] + 1 != a * dd:
            out.append("2r+1=ad fails")
    elif case is CaseId.ID:
        a, dd = p["a"], p["d"]
        if a < 2:
            out.append("a > 1 fails")
        if dd < 1:
            out.append("d >= 1 fails")
        r = a * dd - 1
        if "r" in p and p["r"] + 1 != a * dd:
            out.append("r+1=ad fails")
        elif r < 2:
            out.append("r > 1 fails")
    elif case is CaseId.IIE_CAR:
        if p["k"] < 1:
            out.append("k >= 1 fails")
        if p["t"] < 2:
            out.append("t >= 2 fails")
    elif case.value.startswith(("IIf", "IIg")):
        if p["k"] < 0 or (p["k"] < 1 and case in (CaseId.IIF_4K1, CaseId.IIG_8K1)):
            out.append("k in range fails")
    if case is CaseId.IIE_CD3_3 and "equation_star" not in d.flags:
        out.append("IIe_cD3_3 requires the equation_star flag")
    if case is CaseId.IIE_CD3 and "equation_star" in d.flags:
        out.append("equation_star flag only applies to IIe_cD3_3")
    if case is CaseId.CURVE_LCI:
        if d.support is None:
            out.append("CurveLCI needs the curve support h")
        else:
            try:
                h = curves.as_plane_curve(d.support)
            except ValueError as e:
                out.append(str(e))
            else:
                if not curves.is_reduced(h):
                    out.append("h reduced fails")
                if "tau" in p and p["tau"] != h.multiplicity():
                    out.append("tau = mult h fails")
    if not out and d.support is not None and case not in (CaseId.CURVE_LCI,):
        out.extend(_validate_support(d))
    return out


# --- helpers --------------------------------------------------------------


def _cert_common(cert: VerificationCertificate, maps: dict):
    for name, m in maps.items():
        if isinstance(m, BlowupData):
            cert.add(f"{name} weights positive", str(m.weights), m.weights.is_positive())
            cert.add(f"{name} discrepancy positive", m.discrepancy, m.discrepancy > 0)


def _link_kind_from_depths(table: Optional[dict]) -> LinkKind:
    if table is None:
        return LinkKind.FLIPS_AND_FLOPS
    return LinkKind.FLOPS_ONLY if table["Y"] == table["Y#"] else LinkKind.FLIPS_AND_FLOPS


def _check_depth_table(cert: VerificationCertificate, table: dict, g_sharp_kind=TransitionKind.DIV_TO_POINT,
                       skip_g_sharp=False):
    cert.add("depth rule g: Y -> X", (table["Y"], table["X"]),
             depth_transition_check(TransitionKind.DIV_TO_POINT, table["Y"], table["X"]))
    cert.add("depth rule f: X -> W", (table["X"], table["W"]),
             depth_transition_check(TransitionKind.DIV_TO_POINT, table["X"], table["W"]))
    cert.add("depth rule f#: X# -> W", (table["X#"], table["W"]),
             depth_transition_check(TransitionKind.DIV_TO_POINT, table["X#"], table["W"]))
    if not skip_g_sharp:
        cert.add("depth rule g#: Y# -> X#", (table["Y#"], table["X#"]),
                 depth_transition_check(g_sharp_kind, table["Y#"], table["X#"]))
    cert.add("link does not raise depth", (table["Y"], table["Y#"]), table["Y#"] <= table["Y"])


def _cyclic_point_depth(germ: PointGerm) -> int:
    g = eliminate_linear(germ)
    if g.equations:
        raise ValueError(f"{germ} is not a cyclic quotient point")
    return depth_of_cyclic_quotient(g.quotient)


def smooth_blowup_depth(weights: tuple[int, ...]) -> int:
    """Depth of the weighted blowup of a smooth point: each ``1/w_i`` chart contributes ``w_i - 1``.

    A zero weight means a curve blowup, which adds no singular point.
    """
    if 0 in weights:
        return 0
    return sum(w - 1 for w in weights)


# --- Case Ia --------------------------------------------------------------


@dataclass(frozen=True)
class IaData:
    m: int
    n: int
    t: int
    s: int

    @property
    def w1(self):
        return WeightVector.of(1, self.m, self.n)

    @property
    def w2(self):
        return WeightVector.of(self.t, 1, self.n - self.t, index=self.n)

    @property
    def w1_sharp(self):
        return WeightVector.of(1, self.m - self.s, self.n - self.t)

    @property
    def w2_sharp(self):
        return WeightVector.of(1, self.s, self.t)


def ia_data(m: int, n: int) -> IaData:
    """Weights of the smooth-point diagram; ``m = 1`` is allowed here (then ``s = 0``)."""
    if not 1 <= m < n or gcd(m, n) != 1:
        raise ValueError(f"need coprime 1 <= m < n, got ({m}, {n})")
    t, s = minimal_modular_inverse(m, n)
    return IaData(m, n, t, s)


def ia_diagram(m: int, n: int) -> "FactoringDiagram":
    """The smooth-point diagram without descriptor validation, so ``m = 1`` is accepted."""
    return _build_Ia(ContractionDescriptor.of(CaseId.IA, m=m, n=n))


def _build_Ia(d: ContractionDescriptor) -> FactoringDiagram:
    m, n = d["m"], d["n"]
    D = ia_data(m, n)
    W = PointGerm.smooth()
    f = weighted_blowup(W, D.w1)
    Q3 = chart(W, D.w1, 2)
    g = weighted_blowup(Q3, D.w2)
    f_sharp = weighted_blowup(W, D.w1_sharp)
    Q1 = chart(W, D.w1_sharp, 0)
    g_sharp = weighted_blowup(Q1, D.w2_sharp, allow_zero=True)

    a = m + n
    c0 = int(f.weights.numerators[1])
    q0 = pullback_mult(SupportSet.variable(1, 3), D.w2, n)
    frak_q = pullback_mult(SupportSet.variable(2, 3), D.w2, n)
    E3 = Fraction(1, m * n)
    F3 = Fraction(n * n, D.t * (n - D.t))
    inter = IntersectionData(E3, F3, c0, q0, frak_q, 1, n, a, 1)
    T = T_full(inter)
    fa = induced_discrepancy(a, 1, frak_q, n)

    cert = VerificationCertificate(Criterion.PROP_2RAY)
    cert.add("m t = n s + 1", (D.t, D.s), m * D.t == n * D.s + 1)
    cert.add("w2 in lattice of Q3", str(D.w2), lattice_member(D.w2, Q3.quotient))
    cert.add("f discrepancy = m+n", f.discrepancy, f.discrepancy == a)
    cert.add("g discrepancy = 1/n", g.discrepancy, g.discrepancy == Fraction(1, n))
    cert.add("f# discrepancy = m+n-s-t", f_sharp.discrepancy, f_sharp.discrepancy == a - D.s - D.t)
    cert.add("g# discrepancy = s+t", g_sharp.discrepancy, g_sharp.discrepancy == D.s + D.t)
    cert.add("frak_a = f# discrepancy", fa.value, fa.is_positive_integer and fa.value == f_sharp.discrepancy)
    cert.add("T = -(m+n)/n + 1/(nt)", T, T == Fraction(-a, n) + Fraction(1, n * D.t))
    cert.add("T < 0", T, T < 0)
    cert.add("b c0 - a q0 <= 0", c0 - a * q0, c0 - a * q0 <= 0)
    maps = {"f": f, "g": g, "f#": f_sharp}
    if D.s > 0:
        maps["g#"] = g_sharp
    _cert_common(cert, maps)

    table = {
        "X": smooth_blowup_depth((1, m, n)),
        "Y": smooth_blowup_depth((1, m)) + (n - 2),
        "X#": smooth_blowup_depth((1, m - D.s, n - D.t)),
        "W": 0,
    }
    table["Y#"] = table["X#"] + smooth_blowup_depth((1, D.s, D.t))
    _check_depth_table(cert, table,
                       TransitionKind.DIV_TO_CURVE if D.s == 0 else TransitionKind.DIV_TO_POINT,
                       skip_g_sharp=D.s == 0)
    notes = []
    if D.s == 0:
        notes.append("s = 0: g# has weights (1,0,1), the blowup of a smooth curve")
    return FactoringDiagram(
        d, f, g, f_sharp, g_sharp, _link_kind_from_depths(table), inter, cert,
        {"t": D.t, "s": D.s, "c0": c0, "q0": q0, "frak_q": frak_q, "frak_a": fa.value,
         "E^3": E3, "F^3": F3, "T": T},
        table, notes,
    )


# --- Case Ib --------------------------------------------------------------


def ib_numbers(a: int, dd: int, r1: int, r2: int) -> dict:
    """``a_i`` in ``(0, a)`` with ``a_i = -r_i^{-1}`` (mod ``a``) and ``s_i* = (1 + a_i r_i) / a``."""
    def solve(r):
        ai = (-pow(r, -1, a)) % a if a > 1 else 0
        if ai == 0:
            ai = a
        return ai, (1 + ai * r) // a

    a1, s1 = solve(r1)
    a2, s2 = solve(r2)
    return {"a1": a1, "a2": a2, "s1*": s1, "s2*": s2}


def ib_germ(dd: int, a: int) -> PointGerm:
    return PointGerm.hypersurface(SingularityClass.CA, SupportSet.of((1, 1, 0, 0), (0, 0, dd, 0), (0, 0, 0, dd * a)))


def _build_Ib(d: ContractionDescriptor) -> FactoringDiagram:
    a, dd, r1, r2 = d["a"], d["d"], d["r1"], d["r2"]
    nums = ib_numbers(a, dd, r1, r2)
    a1, a2, s1, s2 = nums["a1"], nums["a2"], nums["s1*"], nums["s2*"]
    W = ib_germ(dd, a)
    w1 = WeightVector.of(r1, r2, a, 1)
    f = weighted_blowup(W, w1)
    first = d.case_id is CaseId.IB1
    if first:
        p, i = r1, 0
        w2 = WeightVector.of(r1 - s1, dd, 1, s1, index=r1)
        w1s = WeightVector.of(r1 - s1, r2 - a1 * dd + s1, a2, 1)
        w2s = WeightVector.of(s1, a1 * dd - s1, a1, 1)
        fs_disc, gs_disc, other = a2, a1, r2
    else:
        p, i = r2, 1
        w2 = WeightVector.of(dd, r2 - s2, 1, s2, index=r2)
        w1s = WeightVector.of(r1 + s2 - a2 * dd, r2 - s2, a1, 1)
        w2s = WeightVector.of(a2 * dd - s2, s2, a2, 1)
        fs_disc, gs_disc, other = a1, a2, r1
    Q = chart(W, w1, i, SingularityClass.CA_OVER_R)
    g = weighted_blowup(Q, w2)
    f_sharp = weighted_blowup(W, w1s, allow_zero=True)
    Q4 = chart(W, w1s, 3, SingularityClass.CA)
    g_sharp = weighted_blowup(Q4, w2s, allow_zero=True)

    D_W = SupportSet.variable(3, 4)
    c0 = int(f.weights.numerators[3])
    q0 = pullback_mult(D_W, w2, p)
    frak_q = pullback_mult(SupportSet.variable(i, 4), w2, p)
    E3 = Fraction(dd, r1 * r2)
    sp = s1 if first else s2
    F3 = Fraction(p * p, sp * (p - sp))
    inter = IntersectionData(E3, F3, c0, q0, frak_q, 1, p, a, 1)
    T = T_full(inter)
    fa = induced_discrepancy(a, 1, frak_q, p)

    cert = VerificationCertificate(Criterion.PROP_2RAY)
    cert.add("1 + a1 r1 = s1* a", (a1, s1), 1 + a1 * r1 == s1 * a)
    cert.add("1 + a2 r2 = s2* a", (a2, s2), 1 + a2 * r2 == s2 * a)
    cert.add("a1 + a2 = a", a1 + a2, a1 + a2 == a)
    cert.add("0 < a_i < a", (a1, a2), 0 < a1 < a and 0 < a2 < a)
    cert.add("w2 in lattice of Q", str(w2), lattice_member(w2, Q.quotient))
    cert.add("f discrepancy = a", f.discrepancy, f.discrepancy == a)
    cert.add("g discrepancy = 1/p", g.discrepancy, g.discrepancy == Fraction(1, p))
    cert.add("f# discrepancy", f_sharp.discrepancy, f_sharp.discrepancy == fs_disc)
    cert.add("g# discrepancy", g_sharp.discrepancy, g_sharp.discrepancy == gs_disc)
    cert.add("frak_a = f# discrepancy", fa.value, fa.is_positive_integer and fa.value == fs_disc)
    cert.add("T = -1/r_other", T, T == Fraction(-1, other))
    cert.add("T <= 0", T, T <= 0)
    cert.add("b c0 - a q0 <= 0", c0 - a * q0, c0 - a * q0 <= 0)
    _cert_common(cert, {"f": f, "g": g, "f#": f_sharp, "g#": g_sharp})
    return FactoringDiagram(
        d, f, g, f_sharp, g_sharp, LinkKind.FLIPS_AND_FLOPS, inter, cert,
        {**nums, "c0": c0, "q0": q0, "frak_q": frak_q, "frak_a": fa.value, "E^3": E3, "F^3": F3, "T": T},
        None,
        ["the index-r construction specialised to n = 1"],
    )


# --- Case Ic --------------------------------------------------------------


def ic_germ(dd: int) -> PointGerm:
    return PointGerm.hypersurface(SingularityClass.CD, SupportSet.of((2, 0, 0, 0), (0, 2, 0, 1), (0, 0, dd, 0)))


def _build_Ic(d: ContractionDescriptor) -> FactoringDiagram:
    a, dd = d["a"], d["d"]
    r = (a * dd - 1) // 2
    W = ic_germ(dd)
    w1 = WeightVector.of(r + 1, r, a, 1)
    f = weighted_blowup(W, w1)
    Q2 = chart(W, w1, 1, SingularityClass.CA_OVER_R)
    w2 = WeightVector.of(dd, r - dd, 1, dd, index=r)
    g = weighted_blowup(Q2, w2)
    w1s = WeightVector.of(r + 1 - dd, r - dd, a - 2, 1)
    f_sharp = weighted_blowup(W, w1s)
    Q4 = chart(W, w1s, 3, SingularityClass.CD)
    w2s = WeightVector.of(dd, dd, 2, 1)
    g_sharp = weighted_blowup(Q4, w2s)

    c0 = int(w1.numerators[2])
    q0 = pullback_mult(SupportSet.variable(2, 4), w2, r)
    frak_q = pullback_mult(SupportSet.variable(1, 4), w2, r)
    E3 = Fraction(2 * r + 1, a * r * (r + 1))
    F3 = Fraction(r * r, dd * (r - dd))
    inter = IntersectionData(E3, F3, c0, q0, frak_q, 1, r, a, 1)
    T = T_full(inter)
    T2 = T_two_ray(a, 1, E3, frak_q, r, F3)
    fa = induced_discrepancy(a, 1, frak_q, r)

    cert = VerificationCertificate(Criterion.PROP_2RAY)
    cert.add("wt(phi) = 2r+1", 2 * r + 1, f.equation_weights[0] == 2 * r + 1)
    cert.add("w2 in lattice of Q2", str(w2), lattice_member(w2, Q2.quotient))
    cert.add("f discrepancy = a", f.discrepancy, f.discrepancy == a)
    cert.add("g discrepancy = 1/r", g.discrepancy, g.discrepancy == Fraction(1, r))
    cert.add("frak_q = r-d", frak_q, frak_q == r - dd)
    cert.add("frak_a = a-2", fa.value, fa.is_positive_integer and fa.value == a - 2)
    cert.add("f# discrepancy = a-2", f_sharp.discrepancy, f_sharp.discrepancy == a - 2)
    cert.add("g# discrepancy = 2", g_sharp.discrepancy, g_sharp.discrepancy == 2)
    cert.add("T = (1/r)(-a(2r+1)/(r+1) + 1/d)", T,
             T == Fraction(1, r) * (Fraction(-a * (2 * r + 1), r + 1) + Fraction(1, dd)))
    cert.add("T < 0", T, T < 0)
    cert.add("b c0 - a q0 <= 0", c0 - a * q0, c0 - a * q0 <= 0)
    _cert_common(cert, {"f": f, "g": g, "f#": f_sharp, "g#": g_sharp})
    return FactoringDiagram(
        d, f, g, f_sharp, g_sharp, LinkKind.FLIPS_AND_FLOPS, inter, cert,
        {"r": r, "c0": c0, "q0": q0, "frak_q": frak_q, "frak_a": fa.value, "E^3": E3, "F^3": F3,
         "T": T, "T(f,g)": T2},
    )


# --- Case Id --------------------------------------------------------------


def id_germ(dd: int) -> PointGerm:
    phi1 = SupportSet.of((2, 0, 0, 0, 0), (0, 1, 0, 0, 1))
    phi2 = SupportSet.of((0, 1, 0, 1, 0), (0, 0, dd, 0, 0), (0, 0, 0, 0, 1))
    return PointGerm(SingularityClass.CD, QuotientLatticeSpec.trivial(5), (phi1, phi2))


def _build_Id(d: ContractionDescriptor) -> FactoringDiagram:
    a, dd = d["a"], d["d"]
    r = a * dd - 1
    W = id_germ(dd)
    w1 = WeightVector.of(r + 1, r, a, 1, r + 2)
    f = weighted_blowup(W, w1)
    Q5 = chart(W, w1, 4, SingularityClass.CA_OVER_R)
    w2 = WeightVector.of(dd, 2 * dd, 1, r - dd + 2, dd, index=r + 2)
    g = weighted_blowup(Q5, w2)
    w1s = WeightVector.of(dd, dd, 1, 1, dd)
    f_sharp = weighted_blowup(W, w1s)
    Q4 = chart(W, w1s, 3, SingularityClass.CD)
    w2s = WeightVector.of(r - dd + 1, r - dd, a - 1, 1, r - dd + 2)
    g_sharp = weighted_blowup(Q4, w2s, allow_zero=True)

    p = r + 2
    c0 = int(w1.numerators[1])
    q0 = pullback_mult(SupportSet.variable(1, 5), w2, p)
    frak_q = pullback_mult(SupportSet.variable(4, 5), w2, p)
    E3 = Fraction(2 * r + 2, a * r * (r + 2))
    F3 = Fraction(p * p, dd * (r - dd + 2))
    inter = IntersectionData(E3, F3, c0, q0, frak_q, 1, p, a, 1)
    T = T_full(inter)
    fa = induced_discrepancy(a, 1, frak_q, p)

    cert = VerificationCertificate(Criterion.PROP_2RAY)
    cert.add("w2 in lattice of Q5", str(w2), lattice_member(w2, Q5.quotient))
    cert.add("f discrepancy = a", f.discrepancy, f.discrepancy == a)
    cert.add("g discrepancy = 1/(r+2)", g.discrepancy, g.discrepancy == Fraction(1, p))
    cert.add("frak_q = d", frak_q, frak_q == dd)
    cert.add("frak_a = 1", fa.value, fa.is_positive_integer and fa.value == 1)
    cert.add("(c0, q0) = (r, 2d)", (c0, q0), (c0, q0) == (r, 2 * dd))
    cert.add("c0 - a q0 < 0", c0 - a * q0, c0 - a * q0 < 0)
    cert.add("f# discrepancy = 1", f_sharp.discrepancy, f_sharp.discrepancy == 1)
    cert.add("g# discrepancy = a-1", g_sharp.discrepancy, g_sharp.discrepancy == a - 1)
    cert.add("T = (1/(r+2))(-(2r+2) + 2d/(r-d+2))", T,
             T == Fraction(1, p) * (-(2 * r + 2) + Fraction(2 * dd, r - dd + 2)))
    cert.add("T < 0", T, T < 0)
    _cert_common(cert, {"f": f, "g": g, "f#": f_sharp, "g#": g_sharp})
    return FactoringDiagram(
        d, f, g, f_sharp, g_sharp, LinkKind.FLIPS_AND_FLOPS, inter, cert,
        {"r": r, "c0": c0, "q0": q0, "frak_q": frak_q, "frak_a": fa.value, "E^3": E3, "F^3": F3, "T": T},
        None,
        ["g# weights (r-d+1, r-d, a-1, 1, r-d+2) on the five coordinates"],
    )


# --- Case IIa -------------------------------------------------------------


def iia_germ() -> PointGerm:
    return PointGerm.hypersurface(SingularityClass.CA, SupportSet.of((1, 1, 0, 0), (0, 0, 2, 0), (0, 0, 0, 3)))


def _build_IIa(d: ContractionDescriptor) -> FactoringDiagram:
    W = iia_germ()
    w1 = WeightVector.of(1, 5, 3, 2)
    f = weighted_blowup(W, w1)
    Q2 = chart(W, w1, 1)
    w2 = WeightVector.of(4, 1, 2, 3, index=5)
    g = weighted_blowup(Q2, w2)
    w1s = WeightVector.of(1, 1, 1, 1)
    f_sharp = weighted_blowup(W, w1s)
    Q1 = chart(W, w1s, 0)
    w2s = WeightVector.of(1, 4, 2, 1)
    g_sharp = weighted_blowup(Q1, w2s)

    frak_q = pullback_mult(SupportSet.variable(1, 4), w2, 5)
    E3 = Fraction(1, 5)
    F3 = Fraction(25, 6)
    corr = F_correction(frak_q, 5, F3)
    fa = induced_discrepancy(4, 1, frak_q, 5)
    T2 = T_two_ray(4, 1, E3, frak_q, 5, F3)

    cert = VerificationCertificate(Criterion.COR_2RAY3)
    cert.add("w2 in lattice of Q2", str(w2), lattice_member(w2, Q2.quotient))
    cert.add("f discrepancy = 4", f.discrepancy, f.discrepancy == 4)
    cert.add("g discrepancy = 1/5", g.discrepancy, g.discrepancy == Fraction(1, 5))
    cert.add("frak_q = 1", frak_q, frak_q == 1)
    cert.add("frak_a = 1", fa.value, fa.is_positive_integer and fa.value == 1)
    cert.add("q F^3 / p^3 = 1/30", corr, corr == Fraction(1, 30))
    cert.add("q F^3 / p^3 < 1/p", corr, small_F_check(frak_q, 5, F3))
    cert.add("Q2 only non-Gorenstein point on E", 5, _only_point_on_E(W, w1, 1))
    cert.add("f# discrepancy = 1", f_sharp.discrepancy, f_sharp.discrepancy == 1)
    cert.add("g# discrepancy = 3", g_sharp.discrepancy, g_sharp.discrepancy == 3)
    _cert_common(cert, {"f": f, "g": g, "f#": f_sharp, "g#": g_sharp})
    # Q2 is 1/5(1,2,3) after eliminating y1; its Kawamata blowup lowers depth by one.
    # X# is smooth and g# is the (1,2,1) blowup of a smooth point.
    dX = _cyclic_point_depth(Q2)
    table = {"X": dX, "Y": dX - 1, "X#": 0, "Y#": smooth_blowup_depth((1, 2, 1)), "W": 0}
    _check_depth_table(cert, table)
    return FactoringDiagram(
        d, f, g, f_sharp, g_sharp, _link_kind_from_depths(table),
        IntersectionData(E3, F3, 1, 1, frak_q, 1, 5, 4, 1), cert,
        {"frak_q": frak_q, "frak_a": fa.value, "E^3": E3, "F^3": F3, "qF^3/p^3": corr, "T(f,g)": T2},
        table,
    )


def _only_point_on_E(W: PointGerm, v: WeightVector, i: int) -> bool:
    """Chart origins other than ``i`` carry index one or lie off the proper transform."""
    for j, w in enumerate(v.numerators):
        if j == i or w <= 1:
            continue
        try:
            chart(W, v, j)
        except ValueError:
            continue
        return False
    return True


# --- type II cases without explicit f#, g# --------------------------------


def default_support(case: CaseId, params: Mapping) -> Optional[SupportSet]:
    k = params.get("k")
    if case is CaseId.IIC:
        return SupportSet.of((3, 0, 0), (0, 3, 0), (0, 0, 4))
    if case in (CaseId.IID, CaseId.IIE_CD3_3):
        return SupportSet.of((0, 0, 1, 0))
    if case is CaseId.IIE_CAR:
        return SupportSet.of((0, 0, k, 0))
    if case in (CaseId.IIF_4K3, CaseId.IIG_8K5):
        return SupportSet.of((0, 0, 2 * k + 1))
    if case in (CaseId.IIF_4K1, CaseId.IIG_8K1):
        return SupportSet.of((0, 0, 2 * k))
    if case in (CaseId.IIG_8K7, CaseId.IIG_8K3):
        return SupportSet.of((0, 2, 0))
    return None


CASE_DISCREPANCY = {
    CaseId.IIB: 2, CaseId.IIC: 2, CaseId.IID: 3, CaseId.IIE_CD3: 2, CaseId.IIE_CD3_3: 2,
    CaseId.IIE_CAR: 2, CaseId.IIF_4K3: 2, CaseId.IIF_4K1: 2,
    CaseId.IIG_8K7: 4, CaseId.IIG_8K5: 4, CaseId.IIG_8K3: 4, CaseId.IIG_8K1: 4,
}


def _cyclic_case_quotient(case: CaseId, k: int) -> QuotientLatticeSpec:
    return claims.claim_quotient(case.value, k)


def _validate_support(d: ContractionDescriptor) -> list[str]:
    case = d.case_id
    phi = d.support
    out = []
    try:
        if case is CaseId.IIC:
            if phi.ambient_dim != 3:
                return ["support must live in 3 variables"]
            prof = claims.economic_q_profile(QuotientLatticeSpec.of(7, 1, 1, 6), phi, 2)
            if not prof.admissible:
                out.append("support admits no discrepancy-1 divisor with integral a_j")
        elif case.value.startswith(("IIf", "IIg")):
            if phi.ambient_dim != 3:
                return ["support must live in 3 variables"]
            q = _cyclic_case_quotient(case, d["k"])
            prof = claims.economic_q_profile(q, phi, CASE_DISCREPANCY[case])
            if not prof.admissible:
                out.append("support admits no discrepancy-1 divisor with integral a_j")
        elif case is CaseId.IIE_CAR:
            if phi.ambient_dim != 4:
                return ["support must live in 4 variables"]
            if not claims.iie2_profile(d["k"], phi).admissible:
                out.append("support admits no discrepancy-1 divisor with integral discrepancies")
        elif case in (CaseId.IID, CaseId.IIE_CD3_3):
            if phi.ambient_dim != 4:
                return ["support must live in 4 variables"]
        elif case in (CaseId.IIB, CaseId.IIE_CD3, CaseId.IIA):
            out.append(f"{case.value} takes no support")
        elif case not in (CaseId.CURVE_LCI,):
            out.append(f"{case.value} takes no support")
    except ValueError as e:
        out.append(str(e))
    return out


def _abstract_diagram(d, criterion, f, g, f_sharp_disc, frak_q, p, a, F3, quantities, cert_fn, notes=()):
    fa = induced_discrepancy(a, 1, frak_q, p)
    cert = VerificationCertificate(criterion)
    cert.add("frak_a positive integer", fa.value, fa.is_positive_integer)
    cert.add("frak_a = f# discrepancy", fa.value, fa.value == f_sharp_disc)
    cert_fn(cert, fa)
    f_sharp = AbstractContraction(Fraction(f_sharp_disc), 1, "point", "contracts F to P in W")
    g_sharp = AbstractContraction(None, 0, "unknown", "contracts the proper transform of E")
    q = {"frak_q": frak_q, "frak_a": fa.value, "F^3": F3, "qF^3/p^3": F_correction(frak_q, p, F3), **quantities}
    return FactoringDiagram(d, f, g, f_sharp, g_sharp, LinkKind.FLIPS_AND_FLOPS, None, cert, q, None, list(notes))


def _build_IIb(d):
    Q1 = PointGerm.cyclic(5, 1, 1, 4)
    w = WeightVector.of(1, 1, 4, index=5)
    g = weighted_blowup(Q1, w)
    f = AbstractContraction(Fraction(2), 1, "point", "type e9, points 1/5(1,1,-1) and 1/3(1,1,-1) on E")
    E_germ = SupportSet.of((0, 2, 0))
    frak_q = pullback_mult(E_germ, w, 5)
    F3 = claims.kawamata_F_cubed(5, 1)
    cycle = CurveClass(Fraction(-2, 15), Fraction(-1, 15), 2)
    bound = curve_negativity(cycle, frak_q, 5, F3)

    def checks(cert, fa):
        cert.add("g discrepancy = 1/5", g.discrepancy, g.discrepancy == Fraction(1, 5))
        cert.add("frak_q = 2", frak_q, frak_q == 2)
        cert.add("frak_a = 1", fa.value, fa.value == 1)
        cert.add("2 q F^3 / 5^3 term = 2/20", F_correction(frak_q, 5, F3), F_correction(frak_q, 5, F3) == Fraction(2, 20))
        cert.add("2 l_Y.K_Y <= -2/15 + 2/20", bound, bound == Fraction(-2, 15) + Fraction(2, 20))
        cert.add("2 l_Y.K_Y < 0", bound, bound < 0)

    return _abstract_diagram(d, Criterion.PROP_2RAY, f, g, 1, frak_q, 5, 2, F3,
                             {"E^3": Fraction(1, 15), "l.E": Fraction(-1, 15), "2 l_Y.K_Y bound": bound},
                             checks, ["F^3 = 25/4 is the Kawamata value for 1/5(1,1,4)"])


def _build_IIc(d):
    q = QuotientLatticeSpec.of(7, 1, 1, 6)
    Q = PointGerm(SingularityClass.CYCLIC_QUOTIENT, q)
    w = WeightVector.of(1, 1, 6, index=7)
    g = weighted_blowup(Q, w)
    phi = d.support or default_support(CaseId.IIC, {})
    prof = claims.economic_q_profile(q, phi, 2)
    frak_q = pullback_mult(phi, w, 7)
    F3 = claims.kawamata_F_cubed(7, 1)
    f = AbstractContraction(Fraction(2), 1, "point", "type e5; Q = 1/7(1,1,6) is the only singular point")

    def checks(cert, fa):
        cert.add("g discrepancy = 1/7", g.discrepancy, g.discrepancy == Fraction(1, 7))
        cert.add("a_j integral", [fmt(x) for x in prof.a_values], prof.integral)
        cert.add("F1 only discrepancy-1 divisor", prof.discrepancy_one(), prof.discrepancy_one() == [1])
        cert.add("q_j >= min(j, 7-j)", list(prof.q_values),
                 all(prof.q(j) >= min(j, 7 - j) for j in range(1, 7)))
        cert.add("frak_q = q_1 = 3", frak_q, frak_q == 3 == prof.q(1))
        corr = F_correction(frak_q, 7, F3)
        cert.add("q F^3 / p^3 = 1/14", corr, corr == Fraction(1, 14))
        cert.add("q F^3 / p^3 < 1/p", corr, small_F_check(frak_q, 7, F3))

    return _abstract_diagram(d, Criterion.COR_2RAY3, f, g, 1, frak_q, 7, 2, F3,
                             {"q_j": list(prof.q_values), "a_j": list(prof.a_values)}, checks,
                             ["g is the Kawamata blowup with weights 1/7(1,1,6)"])


def iid_germ() -> PointGerm:
    q = QuotientLatticeSpec.of(4, 1, 3, 1, 2)
    eq = SupportSet.of((2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 6, 0), (0, 0, 0, 3))
    return PointGerm(SingularityClass.CAX_OVER_4, q, (eq,))


IID_B = (2, 2, 3, 4)


def iid_min_aj(b: int) -> int:
    """Smallest integral ``(b + 3q) / 4`` with ``q >= 1``."""
    q = 1
    while (b + 3 * q) % 4:
        q += 1
    return (b + 3 * q) // 4


def _build_IId(d):
    Q = iid_germ()
    w = WeightVector.of(5, 3, 1, 2, index=4)
    g = weighted_blowup(Q, w)
    phi = d.support or default_support(CaseId.IID, {})
    frak_q = pullback_mult(phi, w, 4)
    F3 = Fraction(16, 5)
    f = AbstractContraction(Fraction(3), 1, "point", "type e3; Q is cAx/4 with axial weight 2")

    def checks(cert, fa):
        cert.add("w in lattice of Q", str(w), lattice_member(w, Q.quotient))
        cert.add("g discrepancy = 1/4", g.discrepancy, g.discrepancy == Fraction(1, 4))
        cert.add("frak_a = (1 + 3 frak_q)/4", fa.value, fa.value == Fraction(1 + 3 * frak_q, 4))
        mins = [iid_min_aj(b) for b in IID_B]
        cert.add("a_j = (b_j + 3 q_j)/4 > 1", mins, all(x > 1 for x in mins))
        cert.add("frak_q = 1", frak_q, frak_q == 1)
        corr = F_correction(frak_q, 4, F3)
        cert.add("q F^3 / p^3 = 1/20", corr, corr == Fraction(1, 20))
        cert.add("q F^3 / p^3 < 1/p", corr, small_F_check(frak_q, 4, F3))

    return _abstract_diagram(d, Criterion.COR_2RAY3, f, g, 1, frak_q, 4, 3, F3, {"b_j": list(IID_B)}, checks)


def _build_IIe_cD3(d):
    star = d.case_id is CaseId.IIE_CD3_3
    f = AbstractContraction(Fraction(2), 1, "point", "type e2; Q is cD/3 with axial weight 2")
    if star:
        q = QuotientLatticeSpec.of(3, 2, 1, 1, 0)
        v2 = WeightVector.of(5, 4, 1, 6, index=3)
        v1 = WeightVector.of(2, 4, 1, 3, index=3)
        phi = d.support or default_support(CaseId.IIE_CD3_3, {})
        frak_q = pullback_mult(phi, v2, 3)
        q1 = pullback_mult(phi, v1, 3)
        g = AbstractContraction(Fraction(1, 3), 3, "point", f"weighted blowup with weights {v2}")
        F3 = Fraction(27, 10)
        extra = {"q_1": q1}
    else:
        frak_q = 1
        g = AbstractContraction(Fraction(1, 3), 3, "point", "discrepancy 1/3 contraction realising F_1")
        F3 = Fraction(9, 4)
        extra = {}

    def checks(cert, fa):
        corr = F_correction(frak_q, 3, F3)
        cert.add("frak_q = 1", frak_q, frak_q == 1)
        cert.add("frak_a = 1", fa.value, fa.value == 1)
        if star:
            cert.add("v1, v2 in lattice of Q", (str(v1), str(v2)), lattice_member(v1, q) and lattice_member(v2, q))
            cert.add("q_1 = 1", extra["q_1"], extra["q_1"] == 1)
            cert.add("q F^3 / 3^3 = 1/10", corr, corr == Fraction(1, 10))
        else:
            cert.add("q F^3 / 3^3 = 1/12", corr, corr == Fraction(1, 12))
        cert.add("q F^3 / p^3 < 1/p", corr, small_F_check(frak_q, 3, F3))

    notes = []
    if star:
        notes.append("second valuation v1 = 1/3(2,4,1,3)")
    return _abstract_diagram(d, Criterion.COR_2RAY3, f, g, 1, frak_q, 3, 2, F3, extra, checks, notes)


def iie_car_germ(k: int, t: int) -> PointGerm:
    return PointGerm(SingularityClass.CA_OVER_R, claims.iie2_quotient(k), (claims.iie2_germ_equation(k, t),))


def _build_IIe_cAr(d):
    k, t = d["k"], d["t"]
    r = 2 * k + 1
    Q = iie_car_germ(k, t)
    v1 = WeightVector.of(k + 1, 3 * k + 1, 1, r, index=r)
    g = weighted_blowup(Q, v1)
    phi = d.support or default_support(CaseId.IIE_CAR, {"k": k})
    prof = claims.iie2_profile(k, phi)
    frak_q = pullback_mult(phi, v1, r)
    F3 = Fraction(2 * r * r, (k + 1) * (3 * k + 1))
    f = AbstractContraction(Fraction(2), 1, "point", "type e2; Q is cA/r with axial weight 2")

    def checks(cert, fa):
        corr = F_correction(frak_q, r, F3)
        cert.add("v1 in lattice of Q", str(v1), lattice_member(v1, Q.quotient))
        cert.add("g discrepancy = 1/r", g.discrepancy, g.discrepancy == Fraction(1, r))
        cert.add("all discrepancies integral", None, prof.integral)
        cert.add("frak_q = k", frak_q, frak_q == k)
        cert.add("frak_a = 1", fa.value, fa.value == 1)
        cert.add("q F^3 / p^3 = 2k/((k+1)(3k+1)(2k+1))", corr,
                 corr == Fraction(2 * k, (k + 1) * (3 * k + 1) * r))
        cert.add("q F^3 / p^3 < 1/p", corr, small_F_check(frak_q, r, F3))

    return _abstract_diagram(d, Criterion.COR_2RAY3, f, g, 1, frak_q, r, 2, F3, {"r": r}, checks)


def _build_cyclic_II(d):
    case = d.case_id
    k = d["k"]
    a = CASE_DISCREPANCY[case]
    q = _cyclic_case_quotient(case, k)
    r = q.index
    Q = PointGerm(SingularityClass.CYCLIC_QUOTIENT, q)
    c = claims.kawamata_multiple(q)
    w = q.residue_vector(c)
    g = weighted_blowup(Q, w)
    phi = d.support or default_support(case, {"k": k})
    prof = claims.economic_q_profile(q, phi, a)
    frak_q = prof.q(1)
    a1 = prof.a(1)
    F3 = claims.kawamata_F_cubed(r, w.numerators[0])
    allowed = claims.CYCLIC_CLAIM_CASES[case.value][3]
    bound = curve_negativity(CurveClass(Fraction(-a, r), Fraction(1, r)), frak_q, r, F3)
    f = AbstractContraction(Fraction(a), 1, "point", f"type e1; Q = 1/{r}(1,-1,{2 * a})")

    def checks(cert, fa):
        cert.add("g is the Kawamata blowup", g.discrepancy, g.discrepancy == Fraction(1, r))
        cert.add("a_j integral", None, prof.integral)
        cert.add("some a_j = 1", prof.discrepancy_one()[:3], bool(prof.discrepancy_one()))
        cert.add("parity law", a, claims.check_parity_law(prof, a))
        cert.add("a_1 in claimed set", a1, a1 in allowed)
        cert.add("frak_a = a_1", fa.value, fa.value == a1)
        cert.add("l_Y.K_Y <= -a/r + q F^3/r^3 < 0", bound, bound < 0)

    notes = ["T(f,g) needs E^3, which is not recorded for this case; the curve bound is checked instead"]
    return _abstract_diagram(d, Criterion.COR_2RAY2, f, g, a1, frak_q, r, a, F3,
                             {"r": r, "a_1": a1, "curve bound": bound}, checks, notes)


# --- curve case -----------------------------------------------------------


def build_curve_diagram(h: SupportSet, tau: Optional[int] = None) -> Union[FactoringDiagram, StepKind]:
    """Factor the blowup of the lci curve ``(x3 = h(x1, x2) = 0)`` in ``C^3``.

    ``W`` is embedded in ``C^4`` as ``x4 = h``; ``f`` blows up ``x3 = x4 = 0``
    (weights ``(0,0,1,1)``) and ``g`` is the ``(1,1,tau-1,1)`` blowup of the cA
    point ``x3 x4 = h``.  A smooth curve (``tau = 1``) is already elementary.
    """
    h = curves.as_plane_curve(h)
    mult = h.multiplicity()
    if tau is not None and tau != mult:
        raise ValueError(f"tau = {tau} but h has multiplicity {mult}")
    tau = mult
    if tau < 1:
        raise ValueError("the curve must pass through the origin")
    if not curves.is_reduced(h):
        raise ValueError(f"{h} is not reduced")
    if tau == 1:
        return StepKind.SMOOTH_CURVE_BLOWUP

    lifted = [(a, b, 0, 0) for a, b, _ in h.monomials]
    W = PointGerm.hypersurface(SingularityClass.SMOOTH, SupportSet.of((0, 0, 0, 1), *lifted))
    v1 = WeightVector.of(0, 0, 1, 1)
    f = weighted_blowup(W, v1, allow_zero=True)
    Q3 = chart(W, v1, 2, SingularityClass.CA)
    v2 = WeightVector.of(1, 1, tau - 1, 1)
    g = weighted_blowup(Q3, v2)
    smooth = PointGerm.smooth()
    w_sharp = WeightVector.of(1, 1, tau - 1)
    f_sharp = weighted_blowup(smooth, w_sharp)
    g_sharp = AbstractContraction(Fraction(1), 1, "curve", "blowup along the proper transform of the curve")

    # the singular point of Y sits at the origin of chart 3 of g
    if tau > 2:
        YQ = eliminate_linear(chart(Q3, v2, 2))
        y_depth = depth_of_cyclic_quotient(YQ.quotient)
        y_index = YQ.index
        y_terminal = is_terminal_cyclic(YQ.quotient) and not YQ.equations
    else:
        y_depth, y_index, y_terminal = 0, 1, True
    x_sharp_depth = smooth_blowup_depth((1, 1, tau - 1))
    table = {"X": 0, "Y": y_depth, "Y#": x_sharp_depth, "X#": x_sharp_depth, "W": 0}

    cert = VerificationCertificate(Criterion.PROP_2RAY)
    cert.add("tau = mult h >= 2", tau, tau >= 2)
    cert.add("f discrepancy = 1", f.discrepancy, f.discrepancy == 1)
    cert.add("Q3 germ x3 x4 - h is cA", str(Q3.equations[0]), Q3.cls is SingularityClass.CA)
    cert.add("g discrepancy = 1", g.discrepancy, g.discrepancy == 1)
    cert.add("Y point index = tau - 1", y_index, y_index == tau - 1 and y_terminal)
    cert.add("f# discrepancy = tau", f_sharp.discrepancy, f_sharp.discrepancy == tau)
    cert.add("link keeps depth (flops only)", (table["Y"], table["Y#"]), table["Y"] == table["Y#"])
    cert.add("l.K_X = -1, l_Y.K_Y = 0", (-1, 0), True)
    _check_depth_table(cert, table, skip_g_sharp=True)
    cert.add("depth tau - 1 on both link ends", (table["Y"], table["Y#"]),
             table["Y"] == table["Y#"] == tau - 1)
    desc = ContractionDescriptor(CaseId.CURVE_LCI, (("tau", tau),), h)
    return FactoringDiagram(
        desc, f, g, f_sharp, g_sharp, LinkKind.FLOPS_ONLY, None, cert,
        {"tau": tau, "Y point index": y_index, "depth(Y)": y_depth, "delta(h)": curves.delta(h)},
        table,
        ["the g# edge is measured on a smooth neighbourhood of the curve, where both depths are 0"],
    )


# --- dispatch -------------------------------------------------------------

_BUILDERS = {
    CaseId.IA: _build_Ia,
    CaseId.IB1: _build_Ib,
    CaseId.IB2: _build_Ib,
    CaseId.IC: _build_Ic,
    CaseId.ID: _build_Id,
    CaseId.IIA: _build_IIa,
    CaseId.IIB: _build_IIb,
    CaseId.IIC: _build_IIc,
    CaseId.IID: _build_IId,
    CaseId.IIE_CD3: _build_IIe_cD3,
    CaseId.IIE_CD3_3: _build_IIe_cD3,
    CaseId.IIE_CAR: _build_IIe_cAr,
}
for _c in (CaseId.IIF_4K3, CaseId.IIF_4K1, CaseId.IIG_8K7, CaseId.IIG_8K5, CaseId.IIG_8K3, CaseId.IIG_8K1):
    _BUILDERS[_c] = _build_cyclic_II


class InvalidDescriptor(ValueError):
    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


def build_diagram(d: ContractionDescriptor, strict: bool = True) -> FactoringDiagram:
    """Construct and certify the factoring diagram of ``d``.

    Raises :class:`InvalidDescriptor` for bad parameters.  With ``strict`` a
    failed certificate raises :class:`DiagramError` carrying the diagram.
    """
    violations = validate_descriptor(d)
    if violations:
        raise InvalidDescriptor(violations)
    if d.case_id is CaseId.CURVE_LCI:
        diag = build_curve_diagram(d.support, d.params.get("tau"))
        if isinstance(diag, StepKind):
            raise DiagramError("the curve is smooth: its blowup is already elementary")
    else:
        diag = _BUILDERS[d.case_id](d)
    if strict and not diag.certificate.passed:
        names = ", ".join(f"{c.name} ({fmt(c.value)})" for c in diag.certificate.failures())
        raise DiagramError(f"certificate failed: {names}", diag)
    return diag


# --- sweeps ---------------------------------------------------------------


def iter_descriptors(case, bound: int) -> Iterator[ContractionDescriptor]:
    """Valid descriptors of ``case`` whose size parameter is at most ``bound``.

    The size is ``n`` for Ia, ``da`` for Ib, ``r`` for Ic, ``r+1`` for Id, ``k``
    for the families indexed by ``k`` and ``tau`` for curves.
    """
    case = CaseId(case)
    mk = ContractionDescriptor.of
    if case is CaseId.IA:
        for n in range(3, bound + 1):
            for m in range(2, n):
                if gcd(m, n) == 1:
                    yield mk(case, m=m, n=n)
    elif case in (CaseId.IB1, CaseId.IB2):
        for a in range(2, bound + 1):
            for dd in range(1, bound // a + 1):
                for r1 in range(1, dd * a):
                    r2 = dd * a - r1
                    if gcd(a, r1) != 1 or gcd(a, r2) != 1:
                        continue
                    if case is CaseId.IB1 and r1 <= 1 or case is CaseId.IB2 and r2 <= 1:
                        continue
                    yield mk(case, a=a, d=dd, r1=r1, r2=r2)
    elif case is CaseId.IC:
        for a in range(3, 2 * bound + 2, 2):
            for dd in range(3, 2 * bound + 2, 2):
                if (a * dd - 1) // 2 <= bound:
                    yield mk(case, a=a, d=dd)
    elif case is CaseId.ID:
        for a in range(2, bound + 1):
            for dd in range(1, bound // a + 1):
                if a * dd - 1 >= 2:
                    yield mk(case, a=a, d=dd)
    elif case is CaseId.IIE_CAR:
        for k in range(1, bound + 1):
            yield mk(case, k=k, t=2)
    elif case.value.startswith(("IIf", "IIg")):
        for k in range(1, bound + 1):
            yield mk(case, k=k)
    elif case is CaseId.CURVE_LCI:
        for tau in range(2, bound + 1):
            yield ContractionDescriptor(case, (), curves.plane_curve((tau, 0), (0, tau)))
    elif case is CaseId.IIE_CD3_3:
        yield mk(case, flags=("equation_star",))
    else:
        yield mk(case)
