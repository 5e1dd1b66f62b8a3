"""The induction engine: expand a birational map into elementary steps.

A :class:`MapState` describes a divisorial contraction (to a point or a
curve) or a flipping contraction abstractly, through the depth of its source,
the depth of its target and, for point contractions, the index and
discrepancy at the centre.  :func:`factorize` expands it with one factoring
diagram per step until only elementary maps are left, and
:func:`termination_certificate` re-checks the whole tree independently.

Depths attached to a state are local: they are measured over a neighbourhood
of the centre.  Each edge of the trace records the local values of its child
together with ``offset``, the depth carried by points away from the centre, so
that ``local + offset`` reproduces the depth table of the diagram.

Quantities the constructions leave open (how far the link lowers depth, how
many flips and flops it contains, the data of an unspecified contraction) are
chosen by an optional :class:`random.Random`; without one the machine takes a
fixed worst-case choice.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from enum import Enum
from math import gcd, inf
from typing import Iterator, Optional, Union

from . import catalogue, claims, curves
from .catalogue import CaseId, ContractionDescriptor
from .lattice import SupportSet
from .report import encode
from .singularity import SingularityClass, StepKind, TransitionKind, depth_transition_check

SC = SingularityClass


class MapKind(Enum):
    DIV_TO_POINT = "DivToPoint"
    DIV_TO_CURVE = "DivToCurve"
    FLIP_CONTRACTION = "FlipContraction"

    @property
    def transition(self) -> TransitionKind:
        return {
            MapKind.DIV_TO_POINT: TransitionKind.DIV_TO_POINT,
            MapKind.DIV_TO_CURVE: TransitionKind.DIV_TO_CURVE,
            MapKind.FLIP_CONTRACTION: TransitionKind.FLIP,
        }[self]


# discrepancies a/1 admitted at Gorenstein points of each class (None: unbounded)
GORENSTEIN_A = {
    SC.SMOOTH: None,
    SC.CA: None,
    SC.CD: None,
    SC.CE6: frozenset({1, 2, 3}),
    SC.CE7: frozenset({1, 2}),
    SC.CE8: frozenset({1, 2}),
}

FIXED_INDEX = {SC.CE_OVER_2: 2, SC.CAX_OVER_4: 4, SC.CD3_SUB1: 3, SC.CD3_SUB2: 3, SC.CD3_SUB3: 3}

SINGULAR_GORENSTEIN = (SC.CA, SC.CD, SC.CE6, SC.CE7, SC.CE8)
NON_GORENSTEIN = (SC.CYCLIC_QUOTIENT, SC.CA_OVER_R, SC.CAX_OVER_4, SC.CD3_SUB1, SC.CD3_SUB2,
                  SC.CD3_SUB3, SC.CE_OVER_2)

# small reduced plane curve singularities used for adversarial curve centres
CURVE_LIBRARY = (
    curves.plane_curve((2, 0), (0, 3)),
    curves.plane_curve((2, 0), (0, 2)),
    curves.plane_curve((3, 0), (0, 3)),
    curves.plane_curve((2, 0), (0, 5)),
    curves.plane_curve((3, 0), (0, 4)),
)


class InadmissibleState(ValueError):
    pass


@dataclass(frozen=True)
class MapState:
    """An abstract map ``f: X -> W`` (or a flip ``X -> W <- X+``).

    ``depth`` is the depth of ``X`` and ``target_depth`` the depth of ``W``
    (of ``X+`` for a flip).  ``n`` and ``a`` give the discrepancy ``a/n`` of a
    point contraction and ``target_class`` the type of its centre.
    ``curve_points`` lists the singular points of the centre of a curve
    contraction from a Gorenstein variety.
    """

    kind: MapKind
    depth: int
    n: int = 1
    a: int = 1
    target_class: SingularityClass = SC.CA
    target_depth: int = 0
    descriptor: Optional[ContractionDescriptor] = None
    curve_points: tuple[SupportSet, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", MapKind(self.kind))
        object.__setattr__(self, "target_class", SC(self.target_class))
        object.__setattr__(self, "curve_points", tuple(self.curve_points))

    # -- constructors ---------------------------------------------------
    @classmethod
    def point(cls, cls_, a: int, depth: int, n: int = 1, target_depth: int = 0,
              descriptor: Optional[ContractionDescriptor] = None) -> "MapState":
        return cls(MapKind.DIV_TO_POINT, depth, n, a, SC(cls_), target_depth, descriptor)

    @classmethod
    def curve(cls, depth: int, target_depth: int = 0, points=()) -> "MapState":
        return cls(MapKind.DIV_TO_CURVE, depth, target_depth=target_depth, curve_points=tuple(points))

    @classmethod
    def flip(cls, depth: int, target_depth: int) -> "MapState":
        return cls(MapKind.FLIP_CONTRACTION, depth, target_depth=target_depth)

    @classmethod
    def smooth_blowup(cls, m: int, n: int) -> "MapState":
        """The ``(1, m, n)`` blowup of a smooth point, ``m <= n`` coprime."""
        d = ContractionDescriptor.of(CaseId.IA, m=m, n=n)
        return cls.point(SC.SMOOTH, m + n, m + n - 2, descriptor=d)

    # -- derived --------------------------------------------------------
    @property
    def is_minimal(self) -> bool:
        if self.kind is not MapKind.DIV_TO_POINT:
            return False
        if self.n > 1:
            return self.a == 1
        if self.target_class is SC.SMOOTH:
            return self.a == 2
        return self.a == 1

    @property
    def parity(self) -> int:
        """1 for an even discrepancy over a cD or cE point, which is first reduced to an odd one."""
        if self.kind is MapKind.DIV_TO_POINT and self.n == 1 and self.a % 2 == 0 and (
                self.target_class is SC.CD or self.target_class.is_cE):
            return 1
        return 0

    def key(self) -> tuple:
        """Termination measure, compared lexicographically."""
        if self.kind is MapKind.DIV_TO_POINT:
            return (self.depth, self.parity, self.a)
        return (self.depth, inf, inf)

    def measure(self) -> tuple:
        return (self.depth, self.a if self.kind is MapKind.DIV_TO_POINT else None)

    def curve_delta(self) -> int:
        return curves.curve_measure(self.curve_points)

    def to_dict(self) -> dict:
        doc = {"kind": self.kind.value, "depth": self.depth, "target_depth": self.target_depth}
        if self.kind is MapKind.DIV_TO_POINT:
            doc.update(n=self.n, a=self.a, target_class=self.target_class.value)
        if self.descriptor is not None:
            doc["descriptor"] = self.descriptor.to_dict()
        if self.curve_points:
            doc["curve_points"] = [[list(m) for m in p] for p in self.curve_points]
        return doc

    @classmethod
    def from_dict(cls, doc) -> "MapState":
        desc = doc.get("descriptor")
        pts = tuple(SupportSet.from_iterable([tuple(m) for m in p], 3) for p in doc.get("curve_points", ()))
        return cls(MapKind(doc["kind"]), int(doc["depth"]), int(doc.get("n", 1)), int(doc.get("a", 1)),
                   SC(doc.get("target_class", SC.CA.value)), int(doc.get("target_depth", 0)),
                   ContractionDescriptor.from_dict(desc) if desc else None, pts)

    def __str__(self):
        if self.kind is MapKind.DIV_TO_POINT:
            return (f"DivToPoint[{self.target_class.value}, a/n={self.a}/{self.n}, "
                    f"depth {self.depth}->{self.target_depth}]")
        if self.kind is MapKind.DIV_TO_CURVE:
            return f"DivToCurve[depth {self.depth}->{self.target_depth}, {len(self.curve_points)} singular points]"
        return f"Flip[depth {self.depth}->{self.target_depth}]"


def admissibility_errors(s: MapState) -> list[str]:
    out = []
    if s.depth < 0 or s.target_depth < 0:
        return ["depths must be non-negative"]
    if s.kind is MapKind.FLIP_CONTRACTION:
        if s.depth == 0:
            out.append("no flipping contraction starts from depth 0")
        elif s.target_depth >= s.depth:
            out.append("a flip must lower depth")
        return out
    if s.kind is MapKind.DIV_TO_CURVE:
        if not depth_transition_check(TransitionKind.DIV_TO_CURVE, s.depth, s.target_depth):
            out.append("curve contraction violates the depth rule")
        if s.depth > 0 and s.curve_points:
            out.append("curve points are only tracked on Gorenstein sources")
        for h in s.curve_points:
            if h.multiplicity() < 2 or not curves.is_reduced(h):
                out.append(f"curve point {h} is not a reduced singular point")
        return out

    if s.n < 1 or s.a < 1:
        return ["index and discrepancy must be positive"]
    if not depth_transition_check(TransitionKind.DIV_TO_POINT, s.depth, s.target_depth):
        out.append("point contraction violates the depth rule")
    cls = s.target_class
    if s.n == 1:
        if not cls.gorenstein:
            out.append(f"{cls.value} points have index > 1")
        if s.target_depth != 0:
            out.append("a Gorenstein centre has local depth 0")
        allowed = GORENSTEIN_A.get(cls)
        if allowed is not None and s.a not in allowed:
            out.append(f"discrepancy {s.a} does not occur over {cls.value}")
        if cls is SC.SMOOTH:
            if s.a < 2:
                out.append("discrepancy over a smooth point is at least 2")
            elif s.depth != s.a - 2:
                out.append("a (1,m,n) blowup with m+n = a has depth a-2")
            if s.descriptor is not None:
                p = s.descriptor.params
                if s.descriptor.case_id is not CaseId.IA or p.get("m", 0) + p.get("n", 0) != s.a:
                    out.append("smooth descriptor must be Ia with m+n = a")
    else:
        if cls.gorenstein:
            out.append(f"{cls.value} points are Gorenstein")
        if cls in FIXED_INDEX and FIXED_INDEX[cls] != s.n:
            out.append(f"{cls.value} points have index {FIXED_INDEX[cls]}")
        if cls is SC.CYCLIC_QUOTIENT and s.a != 1:
            out.append("a terminal quotient point only has the Kawamata blowup")
        if s.target_depth < 1:
            out.append("a non-Gorenstein centre has positive depth")
    if not s.is_minimal and s.depth < 1:
        out.append("a non-minimal contraction has a non-Gorenstein source")
    if not out and s.n == 1 and not s.is_minimal and cls is not SC.SMOOTH:
        if not _gorenstein_plans(s, None, probe=True):
            out.append("no factoring diagram fits these depths")
    return out


def is_admissible(s: MapState) -> bool:
    return not admissibility_errors(s)


# --- trace ----------------------------------------------------------------

ROLE_KINDS = {
    "g": {TransitionKind.DIV_TO_POINT},
    "link:flip": {TransitionKind.FLIP},
    "link:flop": {TransitionKind.FLOP},
    "g#": {TransitionKind.DIV_TO_POINT, TransitionKind.DIV_TO_CURVE},
    "f#": {TransitionKind.DIV_TO_POINT},
}

# depth-table entries an edge of each role runs between
ROLE_TABLE = {"g": ("Y", "X"), "g#": ("Y#", "X#"), "f#": ("X#", "W")}


@dataclass
class Edge:
    role: str
    kind: TransitionKind
    before: int
    after: int
    offset: int = 0

    def to_dict(self) -> dict:
        return {"role": self.role, "kind": self.kind.value, "before": self.before,
                "after": self.after, "offset": self.offset}

    @classmethod
    def from_dict(cls, doc) -> "Edge":
        return cls(doc["role"], TransitionKind(doc["kind"]), doc["before"], doc["after"], doc.get("offset", 0))


@dataclass
class FactorizationTrace:
    """A node of the expansion tree.

    Leaves carry ``leaf`` (an elementary step) and no children; internal
    nodes carry the ``rule`` that expanded them, the ``depth_table`` of the
    diagram and their children in the order ``g``, link, ``g#``, ``f#``.
    A flop leaf has no state.
    """

    root: Optional[MapState]
    rule: str = ""
    children: list = field(default_factory=list)
    depth_table: Optional[dict] = None
    leaf: object = None

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self, path=()) -> Iterator[tuple[tuple, "FactorizationTrace"]]:
        yield path, self
        for i, (_, child) in enumerate(self.children):
            yield from child.walk(path + (i,))

    def edges(self) -> Iterator[tuple[tuple, "FactorizationTrace", Edge, "FactorizationTrace"]]:
        for path, node in self.walk():
            for i, (edge, child) in enumerate(node.children):
                yield path + (i,), node, edge, child

    def leaves(self) -> list:
        return [node.leaf for _, node in self.walk() if node.is_leaf]

    @property
    def measure_ledger(self) -> list:
        """``(depth, a)`` of every state in expansion order (``a`` is ``None`` off point contractions)."""
        return [node.root.measure() for _, node in self.walk() if node.root is not None]

    def height(self) -> int:
        return 1 + max((c.height() for _, c in self.children), default=0)

    def to_dict(self) -> dict:
        doc = {"root": self.root.to_dict() if self.root is not None else None}
        if self.is_leaf:
            doc["leaf"] = self.leaf.value if isinstance(self.leaf, Enum) else self.leaf
        else:
            doc["rule"] = self.rule
            doc["depth_table"] = self.depth_table
            doc["children"] = [{"edge": e.to_dict(), "node": c.to_dict()} for e, c in self.children]
        return doc

    @classmethod
    def from_dict(cls, doc) -> "FactorizationTrace":
        root = MapState.from_dict(doc["root"]) if doc.get("root") else None
        if "children" not in doc:
            leaf = doc.get("leaf")
            for kind in (StepKind, TransitionKind):
                try:
                    leaf = kind(leaf)
                    break
                except ValueError:
                    continue
            return cls(root, leaf=leaf)
        kids = [(Edge.from_dict(c["edge"]), cls.from_dict(c["node"])) for c in doc["children"]]
        return cls(root, doc.get("rule", ""), kids, doc.get("depth_table"))

    def copy(self) -> "FactorizationTrace":
        return FactorizationTrace.from_dict(self.to_dict())


def _leaf(state: Optional[MapState], kind: StepKind) -> FactorizationTrace:
    return FactorizationTrace(state, leaf=kind)


# --- expansion ------------------------------------------------------------


class _Ctx:
    def __init__(self, rng: Optional[random.Random], max_a: int):
        self.rng = rng
        self.max_a = max_a

    def pick(self, options: list, default_index: int = -1):
        if not options:
            raise InadmissibleState("no admissible choice")
        if self.rng is None:
            return options[default_index]
        return self.rng.choice(options)

    def randint(self, lo: int, hi: int, default: int) -> int:
        return default if self.rng is None else self.rng.randint(lo, hi)


@dataclass
class _Child:
    role: str
    state: Optional[MapState]  # None for a flop
    offset: int = 0
    before: Optional[int] = None  # flop depth

    def edge(self) -> Edge:
        if self.state is None:
            return Edge(self.role, TransitionKind.FLOP, self.before, self.before, self.offset)
        return Edge(self.role, self.state.kind.transition, self.state.depth, self.state.target_depth, self.offset)


def factorize(s: MapState, rng: Optional[random.Random] = None, max_a: int = 12) -> FactorizationTrace:
    """Expand ``s`` into a tree whose leaves are elementary steps."""
    errs = admissibility_errors(s)
    if errs:
        raise InadmissibleState(f"{s}: " + "; ".join(errs))
    return _expand(s, _Ctx(rng, max_a))


def _expand(s: MapState, ctx: _Ctx) -> FactorizationTrace:
    if s.kind is MapKind.DIV_TO_POINT and s.is_minimal:
        return _leaf(s, StepKind.MIN_DISCREPANCY_POINT_CONTRACTION)
    if s.kind is MapKind.DIV_TO_CURVE and s.depth == 0 and not s.curve_points:
        return _leaf(s, StepKind.SMOOTH_CURVE_BLOWUP)
    if s.kind is MapKind.DIV_TO_CURVE and s.depth == 0:
        rule, table, kids = _lci_curve(s, ctx)
    elif s.kind is MapKind.DIV_TO_CURVE:
        rule, table, kids = _curve(s, ctx)
    elif s.kind is MapKind.FLIP_CONTRACTION:
        rule, table, kids = _flip(s, ctx)
    elif s.n > 1:
        rule, table, kids = _non_gorenstein(s, ctx)
    elif s.target_class is SC.SMOOTH:
        rule, table, kids = _smooth_point(s, ctx)
    else:
        rule, table, kids = _gorenstein(s, ctx)
    children = []
    for c in kids:
        sub = _leaf(None, StepKind.FLOP) if c.state is None else _expand(c.state, ctx)
        children.append((c.edge(), sub))
    return FactorizationTrace(s, rule, children, table)


def _link(y: int, e: int, ctx: _Ctx) -> list[_Child]:
    """Flips from depth ``y`` down to ``e`` followed by flops at depth ``e``."""
    if ctx.rng is None:
        stops = list(range(y - 1, e - 1, -1))
        flops = 1
    else:
        middle = [v for v in range(e + 1, y) if ctx.rng.random() < 0.5]
        stops = sorted(middle, reverse=True) + ([e] if e < y else [])
        flops = ctx.rng.randint(0, 2)
    out = []
    cur = y
    for nxt in stops:
        out.append(_Child("link:flip", MapState.flip(cur, nxt)))
        cur = nxt
    out.extend(_Child("link:flop", None, before=e) for _ in range(flops))
    return out


def _min_point(depth: int, target: int, index: int = 2) -> tuple[MapState, int]:
    """A minimal-discrepancy contraction from local depths; returns (state, offset)."""
    if target == 0:
        return MapState.point(SC.CA, 1, depth), 0
    return MapState.point(SC.CYCLIC_QUOTIENT, 1, depth, n=index, target_depth=target), 0


def _g_child(d: int) -> _Child:
    """``Y -> X``: the minimal blowup of a highest-index point of ``X`` (depth ``d`` to ``d - 1``)."""
    return _Child("g", MapState.point(SC.CYCLIC_QUOTIENT, 1, d - 1, n=2, target_depth=d))


def _curve_child(role: str, e: int, x: int, ctx: _Ctx, offset: int = 0) -> _Child:
    pts = ()
    if e == 0 and ctx.rng is not None and ctx.rng.random() < 0.5:
        pts = (ctx.rng.choice(CURVE_LIBRARY),)
    return _Child(role, MapState.curve(e, x, pts), offset)


def _point_child(role: str, before: int, after: int, cls: SingularityClass, a: int,
                 n: int = 1, descriptor=None) -> Optional[_Child]:
    """A point contraction between global depths, localised at a Gorenstein centre."""
    if n == 1:
        if before < after:
            return None
        st = MapState.point(cls, a, before - after, descriptor=descriptor)
        offset = after
    else:
        st = MapState.point(cls, a, before, n=n, target_depth=after, descriptor=descriptor)
        offset = 0
    return _Child(role, st, offset) if is_admissible(st) else None


def _abstract_g_sharp(e: int, x: int, ctx: _Ctx) -> Optional[_Child]:
    """``g#`` when the construction only bounds its depths."""
    options = []
    if depth_transition_check(TransitionKind.DIV_TO_CURVE, e, x) and ctx.rng is not None:
        options.append(_curve_child("g#", e, x, ctx))
    if x == 0 or x <= e:
        options.append(_point_child("g#", e, x, SC.CA, 1))
    if x >= 1 and x <= e + 1:
        options.append(_point_child("g#", e, x, SC.CYCLIC_QUOTIENT, 1, n=ctx.randint(2, 5, 2)))
    if ctx.rng is not None and e >= 1 and x >= 1 and x <= e + 1:
        options.append(_point_child("g#", e, x, SC.CA_OVER_R, ctx.randint(1, 3, 1), n=ctx.randint(2, 5, 2)))
    options = [o for o in options if o is not None]
    return ctx.pick(options, 0) if options else None


def _lci_curve(s: MapState, ctx: _Ctx):
    h, rest = s.curve_points[0], s.curve_points[1:]
    tau = h.multiplicity()
    y = tau - 2
    table = {"X": 0, "Y": y, "Y#": y, "X#": y, "W": 0}
    kids = [_Child("g", MapState.point(SC.CA, 1, y))]
    flops = ctx.randint(1, 2, 1)
    kids += [_Child("link:flop", None, before=y) for _ in range(flops)]
    kids.append(_Child("g#", MapState.curve(0, 0, rest + tuple(curves.strict_transforms(h))), offset=y))
    kids.append(_Child("f#", MapState.smooth_blowup(1, tau - 1) if tau > 2 else MapState.point(SC.SMOOTH, 2, 0)))
    return "lci-curve", table, kids


def _curve(s: MapState, ctx: _Ctx):
    d, w = s.depth, s.target_depth
    def feasible(e):
        return [x for x in range(max(0, w - 1), d) if depth_transition_check(TransitionKind.DIV_TO_CURVE, e, x)]

    e = ctx.randint(0, d - 1, d - 1)
    xs = feasible(e)
    if not xs:
        e = d - 1
        xs = feasible(e)
    x = ctx.pick(xs)
    table = {"X": d, "Y": d - 1, "Y#": e, "X#": x, "W": w}
    kids = [_g_child(d)] + _link(d - 1, e, ctx) + [_curve_child("g#", e, x, ctx)]
    if w == 0:
        f_sharp = _point_child("f#", x, 0, SC.CA, 1)
    else:
        f_sharp = _point_child("f#", x, w, SC.CYCLIC_QUOTIENT, 1, n=2)
    kids.append(f_sharp)
    return "curve", table, kids


def _flip(s: MapState, ctx: _Ctx):
    d, x = s.depth, s.target_depth
    es = [e for e in range(0, d) if e + 1 >= x]
    e = ctx.pick(es)
    g_sharp = _abstract_g_sharp(e, x, ctx)
    if g_sharp is None:
        e = d - 1
        g_sharp = _abstract_g_sharp(e, x, ctx)
    table = {"X": d, "Y": d - 1, "Y#": e, "X#": x, "W": None}
    kids = [_g_child(d)] + _link(d - 1, e, ctx) + [g_sharp]
    return "flip", table, kids


def _non_gorenstein(s: MapState, ctx: _Ctx):
    d, w, a = s.depth, s.target_depth, s.a
    plans = []
    for e in range(0, d):
        for x in range(max(0, w - 1), d + 1):
            if x > e + 1:
                continue
            f_opts = []
            if s.target_class is SC.CE_OVER_2:
                g_sharp = _point_child("g#", e, x, SC.CYCLIC_QUOTIENT, 1, n=3)
                for a1 in range(1, a):
                    f_opts.append((g_sharp, _point_child("f#", x, w, s.target_class, a1, n=s.n)))
                rule = "index>1:cE/2"
            else:
                for a1 in range(1, a):
                    cls2 = SC.CYCLIC_QUOTIENT if a - a1 == 1 else SC.CA_OVER_R
                    g_sharp = _point_child("g#", e, x, cls2, a - a1, n=s.n)
                    f_opts.append((g_sharp, _point_child("f#", x, w, s.target_class, a1, n=s.n)))
                rule = "index>1:a'+a''=a"
            for g_sharp, f_sharp in f_opts:
                if g_sharp is not None and f_sharp is not None:
                    plans.append((e, x, g_sharp, f_sharp))
    if not plans:
        raise InadmissibleState(f"{s}: no factoring diagram fits these depths")
    # worst case: keep depth and discrepancy as high as allowed
    plans.sort(key=lambda p: (p[1], p[3].state.a, p[0]))
    e, x, g_sharp, f_sharp = ctx.pick(plans)
    table = {"X": d, "Y": d - 1, "Y#": e, "X#": x, "W": w}
    kids = [_g_child(d)] + _link(d - 1, e, ctx) + [g_sharp, f_sharp]
    return rule, table, kids


def _smooth_point(s: MapState, ctx: _Ctx):
    if s.descriptor is not None:
        m, n = s.descriptor["m"], s.descriptor["n"]
    else:
        pairs = [(m, s.a - m) for m in range(1, (s.a + 1) // 2) if gcd(m, s.a - m) == 1 and m < s.a - m]
        m, n = ctx.pick(pairs)
    diag = catalogue.ia_diagram(m, n)
    D = catalogue.ia_data(m, n)
    t = diag.depth_table
    table = {k: t[k] for k in ("X", "Y", "Y#", "X#", "W")}
    kids = [_Child("g", MapState.point(SC.CYCLIC_QUOTIENT, 1, t["Y"], n=n, target_depth=t["X"]))]
    kids += _link(t["Y"], t["Y#"], ctx)
    if D.s == 0:
        kids.append(_Child("g#", MapState.curve(0, 0), offset=t["X#"]))
    else:
        lo, hi = sorted((D.s, D.t))
        kids.append(_Child("g#", MapState.smooth_blowup(lo, hi), offset=t["X#"]))
    lo, hi = sorted((m - D.s, n - D.t))
    kids.append(_Child("f#", MapState.smooth_blowup(lo, hi)))
    return "smooth:Ia", table, kids


# Gorenstein singular centres: which constructions apply and what they hand down.
# Each entry yields (name, f# discrepancy, g# class and discrepancy or None when abstract).

def _gorenstein_branches(s: MapState) -> list[tuple[str, int, Optional[tuple]]]:
    cls, a = s.target_class, s.a
    cDE = cls is SC.CD or cls.is_cE
    out = []
    if s.descriptor is not None:
        diag = catalogue.build_diagram(s.descriptor, strict=False)
        fs = int(diag.f_sharp.discrepancy)
        gs = diag.g_sharp.discrepancy
        g_cls = SC.CD if s.descriptor.case_id in (CaseId.IC, CaseId.ID) else SC.CA
        g_spec = (g_cls, int(gs)) if gs is not None and gs.denominator == 1 else None
        return [(s.descriptor.case_id.value, fs, g_spec)]
    if cls is SC.CA and a >= 2:
        out += [("Ib", a1, (SC.CA, a - a1)) for a1 in range(1, a)]
    if cls is SC.CA and a == 4 and s.depth == 4:
        out.append(("IIa", 1, (SC.SMOOTH, 3)))
    if a == 3:
        out.append(("IId", 1, None))
    if cls is SC.CD and a % 2 == 1 and a >= 3:
        out.append(("Ic", a - 2, (SC.CD, 2)))
    if cls is SC.CD and a >= 2:
        out.append(("Id", 1, (SC.CD, a - 1)))
    if cDE and a == 2:
        out += [(name, 1, None) for name in ("IIb", "IIc", "IIe_cD3", "IIe_cD3_3", "IIe_cAr")]
        out += [("IIf_4k3", 1, None), ("IIf_4k3", 3, None), ("IIf_4k1", 1, None)]
    if cDE and a == 4:
        for case, (_, _, _, allowed) in claims.CYCLIC_CLAIM_CASES.items():
            if case.startswith("IIg"):
                out += [(case, a1, None) for a1 in sorted(allowed)]
    return out


def _gorenstein_plans(s: MapState, ctx: Optional[_Ctx], probe: bool = False):
    d = s.depth
    plans = []
    ctx = ctx or _Ctx(None, 12)
    for name, fa, g_spec in _gorenstein_branches(s):
        if name == "IIa":
            plans.append((name, 3, 0, _Child("g#", MapState.smooth_blowup(1, 2)),
                          _Child("f#", MapState.point(s.target_class, 1, 0))))
            continue
        for e in range(d - 1, -1, -1):
            for x in range(e, -1, -1):
                f_sharp = _point_child("f#", x, 0, s.target_class, fa)
                if f_sharp is None:
                    continue
                if g_spec is None:
                    g_sharp = _abstract_g_sharp(e, x, _Ctx(None, 12) if probe else ctx)
                else:
                    g_sharp = _point_child("g#", e, x, g_spec[0], g_spec[1])
                if g_sharp is None:
                    continue
                plans.append((name, e, x, g_sharp, f_sharp))
                if probe:
                    return plans
    return plans


def _gorenstein(s: MapState, ctx: _Ctx):
    plans = _gorenstein_plans(s, ctx)
    if not plans:
        raise InadmissibleState(f"{s}: no factoring diagram fits these depths")
    # default: the first plan keeps depth highest and the f# discrepancy as listed
    name, e, x, g_sharp, f_sharp = ctx.pick(plans, 0)
    d = s.depth
    if name == "IIa":
        table = {"X": 4, "Y": 3, "Y#": 1, "X#": 0, "W": 0}
        kids = [_Child("g", MapState.point(SC.CYCLIC_QUOTIENT, 1, 3, n=5, target_depth=4))]
        kids += _link(3, 1, ctx) + [g_sharp, f_sharp]
    else:
        table = {"X": d, "Y": d - 1, "Y#": e, "X#": x, "W": 0}
        kids = [_g_child(d)] + _link(d - 1, e, ctx) + [g_sharp, f_sharp]
    branch = "cA" if s.target_class is SC.CA else ("odd" if s.a % 2 else "even")
    return f"{branch}:{name}", table, kids


# --- certificate ----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    path: tuple
    check: str
    message: str

    def to_dict(self) -> dict:
        return {"path": "/".join(map(str, self.path)) or "root", "check": self.check, "message": self.message}


@dataclass
class TerminationReport:
    valid: bool
    violations: list
    max_recursion_depth: int
    node_count: int
    step_counts: dict
    leaf_counts: dict

    def to_dict(self) -> dict:
        return encode({
            "valid": self.valid,
            "violations": [v.to_dict() for v in self.violations],
            "max_recursion_depth": self.max_recursion_depth,
            "node_count": self.node_count,
            "step_counts": dict(sorted(self.step_counts.items())),
            "leaf_counts": dict(sorted(self.leaf_counts.items())),
        })


WHITELIST = frozenset(StepKind)


def _leaf_consistent(node: FactorizationTrace, edge: Optional[Edge]) -> Optional[str]:
    st = node.root
    if node.leaf is StepKind.FLOP:
        if st is not None:
            return "a flop leaf carries no contraction"
        if edge is not None and edge.kind is not TransitionKind.FLOP:
            return "flop leaf under a non-flop edge"
        return None
    if st is None:
        return "leaf without a state"
    if node.leaf is StepKind.MIN_DISCREPANCY_POINT_CONTRACTION and not st.is_minimal:
        return f"{st} is not of minimal discrepancy"
    if node.leaf is StepKind.SMOOTH_CURVE_BLOWUP and not (
            st.kind is MapKind.DIV_TO_CURVE and st.depth == 0 and not st.curve_points):
        return f"{st} is not the blowup of a smooth curve"
    return None


def termination_certificate(t: FactorizationTrace) -> TerminationReport:
    """Check the trace without trusting the expansion code."""
    bad = []
    steps: dict = {}
    leaves: dict = {}
    for path, node in t.walk():
        if node.is_leaf:
            if not isinstance(node.leaf, StepKind) or node.leaf not in WHITELIST:
                bad.append(Violation(path, "whitelist", f"leaf {node.leaf!r} is not an elementary step"))
                continue
            leaves[node.leaf.value] = leaves.get(node.leaf.value, 0) + 1
            msg = _leaf_consistent(node, None)
            if msg:
                bad.append(Violation(path, "leaf-state", msg))
            continue
        if node.root is None:
            bad.append(Violation(path, "structure", "internal node without a state"))
            continue
        if not node.rule:
            bad.append(Violation(path, "structure", "expansion does not name its rule"))
        steps[node.rule] = steps.get(node.rule, 0) + 1
        bad.extend(_check_node(path, node))
    return TerminationReport(not bad, bad, t.height(), sum(1 for _ in t.walk()), steps, leaves)


def _check_node(path: tuple, node: FactorizationTrace) -> list[Violation]:
    out = []
    s = node.root
    table = node.depth_table or {}
    link_depths = []
    curve_exception = s.kind is MapKind.DIV_TO_CURVE and s.depth == 0
    for i, (edge, child) in enumerate(node.children):
        p = path + (i,)
        kinds = ROLE_KINDS.get(edge.role)
        if kinds is None or edge.kind not in kinds:
            out.append(Violation(p, "role", f"{edge.role} edge cannot be a {edge.kind.value}"))
        if not depth_transition_check(edge.kind, edge.before, edge.after):
            out.append(Violation(p, "depth-rule",
                                 f"{edge.kind.value} from depth {edge.before} to {edge.after}"))
        if edge.offset < 0:
            out.append(Violation(p, "depth-table", "negative offset"))
        c = child.root
        if c is None:
            if child.leaf is not StepKind.FLOP or edge.kind is not TransitionKind.FLOP:
                out.append(Violation(p, "structure", "stateless child must be a flop under a flop edge"))
        else:
            if c.kind.transition is not edge.kind:
                out.append(Violation(p, "edge-state", f"edge says {edge.kind.value}, child is {c.kind.value}"))
            if (edge.before, edge.after) != (c.depth, c.target_depth):
                out.append(Violation(p, "edge-state", f"edge depths {(edge.before, edge.after)} differ from "
                                                      f"child {(c.depth, c.target_depth)}"))
            out.extend(_check_measure(p, s, c, curve_exception))
        if edge.role.startswith("link"):
            link_depths.append((edge.before + edge.offset, edge.after + edge.offset))
        elif edge.role in ROLE_TABLE:
            src, dst = ROLE_TABLE[edge.role]
            want = (table.get(src), table.get(dst))
            got = (edge.before + edge.offset, edge.after + edge.offset)
            if want[1] is None and edge.role == "f#":
                out.append(Violation(p, "structure", "a flip has no f#"))
            elif want != got:
                out.append(Violation(p, "depth-table", f"{edge.role} runs {got}, diagram says {want}"))
    if table:
        if (table.get("X"), table.get("W") if s.kind is not MapKind.FLIP_CONTRACTION else table.get("X#")) != (
                s.depth, s.target_depth):
            out.append(Violation(path, "depth-table", "diagram ends differ from the state"))
        cur = table.get("Y")
        for before, after in link_depths:
            if before != cur:
                out.append(Violation(path, "depth-table", f"link step starts at {before}, expected {cur}"))
            cur = after
        if cur != table.get("Y#"):
            out.append(Violation(path, "depth-table", f"link ends at {cur}, diagram says Y# = {table.get('Y#')}"))
        roles = [e.role for e, _ in node.children]
        need = ["g", "g#"] + (["f#"] if s.kind is not MapKind.FLIP_CONTRACTION else [])
        for r in need:
            if roles.count(r) != 1:
                out.append(Violation(path, "structure", f"expected one {r} edge"))
    else:
        out.append(Violation(path, "structure", "expansion without a depth table"))
    return out


def _check_measure(p: tuple, parent: MapState, child: MapState, curve_exception: bool) -> list[Violation]:
    if curve_exception:
        # blowing up an lci curve: point children are smooth-point blowups or leaves,
        # the curve child has a smaller total delta invariant
        if child.kind is MapKind.DIV_TO_CURVE:
            if child.curve_delta() >= parent.curve_delta():
                return [Violation(p, "measure", "curve child does not lower the delta invariant")]
        elif child.kind is MapKind.DIV_TO_POINT:
            if not (child.is_minimal or child.target_class is SC.SMOOTH):
                return [Violation(p, "measure", "point child of a curve blowup must be smooth or minimal")]
        else:
            return [Violation(p, "measure", "flip under a Gorenstein curve blowup")]
        return []
    if not child.key() < parent.key():
        return [Violation(p, "measure", f"key {child.key()} does not drop below {parent.key()}")]
    return []


# --- random states and mutations -----------------------------------------


def random_admissible_state(rng: random.Random, max_depth: int = 6, max_a: int = 12) -> MapState:
    while True:
        kind = rng.choice(list(MapKind) + [MapKind.DIV_TO_POINT] * 3)
        d = rng.randint(0, max_depth)
        if kind is MapKind.FLIP_CONTRACTION:
            if d == 0:
                continue
            s = MapState.flip(d, rng.randint(0, d - 1))
        elif kind is MapKind.DIV_TO_CURVE:
            if d == 0:
                pts = tuple(rng.sample(CURVE_LIBRARY, rng.randint(0, 2)))
                s = MapState.curve(0, 0, pts)
            else:
                s = MapState.curve(d, rng.randint(0, d - 1))
        else:
            if rng.random() < 0.5:
                cls = rng.choice((SC.SMOOTH,) + SINGULAR_GORENSTEIN)
                if cls is SC.SMOOTH:
                    a = d + 2
                    if a > max_a:
                        continue
                else:
                    a = rng.randint(1, max_a)
                s = MapState.point(cls, a, d)
            else:
                cls = rng.choice(NON_GORENSTEIN)
                n = FIXED_INDEX.get(cls, rng.randint(2, 7))
                a = 1 if cls is SC.CYCLIC_QUOTIENT else rng.randint(1, max_a)
                s = MapState.point(cls, a, d, n=n, target_depth=rng.randint(1, d + 1))
        if is_admissible(s):
            return s


MUTATIONS = ("shift_before", "shift_after", "change_kind", "leaf_to_flip", "child_depth")


def mutate(t: FactorizationTrace, rng: random.Random, how: Optional[str] = None) -> tuple[FactorizationTrace, str]:
    """A copy of ``t`` with exactly one edge corrupted, and a description of the damage."""
    t = t.copy()
    edges = list(t.edges())
    if not edges:
        t.leaf = TransitionKind.FLIP
        return t, "root leaf set to Flip"
    how = how or rng.choice(MUTATIONS)
    path, parent, edge, child = rng.choice(edges)
    where = "/".join(map(str, path))
    if how == "shift_before":
        edge.before += 1
    elif how == "shift_after":
        edge.after = edge.after + 1 if edge.after == 0 or rng.random() < 0.5 else edge.after - 1
    elif how == "change_kind":
        edge.kind = rng.choice([k for k in TransitionKind if k is not edge.kind])
    elif how == "leaf_to_flip":
        leaves = [(p, n) for p, n in t.walk() if n.is_leaf]
        path, node = rng.choice(leaves)
        node.leaf = TransitionKind.FLIP
        return t, f"leaf at {'/'.join(map(str, path)) or 'root'} set to Flip"
    elif how == "child_depth":
        stated = [(p, e, c) for p, _, e, c in t.edges() if c.root is not None]
        path, edge, child = rng.choice(stated)
        child.root = replace(child.root, depth=child.root.depth + 1)
        return t, f"child state at {'/'.join(map(str, path))} depth raised"
    else:
        raise ValueError(f"unknown mutation {how}")
    return t, f"{how} on edge {where}"


def find_curve_children_depth_violation(t: FactorizationTrace) -> list[tuple]:
    """Paths where a positive-depth curve contraction hands ``f#`` a source of depth ``>= d``."""
    out = []
    for path, node in t.walk():
        s = node.root
        if s is None or node.is_leaf or s.kind is not MapKind.DIV_TO_CURVE or s.depth == 0:
            continue
        for i, (e, c) in enumerate(node.children):
            if e.role == "f#" and e.before + e.offset >= s.depth:
                out.append(path + (i,))
    return out
