"""Plane curve singularities with generic coefficients, tracked by monomial support.

A curve germ ``h(x1, x2) = 0`` is stored as a :class:`SupportSet` in three
variables with the third exponent zero (the curve sits in ``x3 = 0``).  Only
the support matters: with generic coefficients the tangent cone has simple
roots away from the coordinate directions, so after one point blowup the only
possibly singular points of the strict transform are the two chart origins.
"""

from __future__ import annotations

from .lattice import SupportSet

MAX_BLOWUPS = 10_000


def plane_curve(*monomials: tuple[int, int]) -> SupportSet:
    return SupportSet.of(*((a, b, 0) for a, b in monomials))


def as_plane_curve(h: SupportSet) -> SupportSet:
    """Normalise a curve support to three variables, checking it only involves x1, x2."""
    monos = []
    for m in h.monomials:
        if any(m[2:]):
            raise ValueError(f"curve support {h} involves variables other than x1, x2")
        monos.append((m[0], m[1], 0))
    return SupportSet.from_iterable(monos, 3)


def multiplicity(h: SupportSet) -> int:
    return h.multiplicity()


def is_reduced(h: SupportSet) -> bool:
    """Reducedness of the generic member with this support.

    A common monomial factor must be squarefree; a single monomial is reduced
    only when it is itself squarefree.
    """
    monos = list(h.monomials)
    g1 = min(m[0] for m in monos)
    g2 = min(m[1] for m in monos)
    return g1 <= 1 and g2 <= 1


def strict_transforms(h: SupportSet) -> list[SupportSet]:
    """Singular points of the strict transform after blowing up the origin.

    Chart ``x2 = x1 u`` sends ``x1^a x2^b`` to ``x1^(a+b-tau) u^b``; chart
    ``x1 = x2 v`` sends it to ``v^a x2^(a+b-tau)``.  A chart origin lies on the
    strict transform when no monomial becomes constant; it is returned when
    its multiplicity is at least 2.
    """
    h = as_plane_curve(h)
    tau = h.multiplicity()
    out = []
    for chart in (0, 1):
        monos = []
        for a, b, _ in h.monomials:
            if chart == 0:
                monos.append((a + b - tau, b, 0))
            else:
                monos.append((a, a + b - tau, 0))
        s = SupportSet.from_iterable(monos, 3)
        if s.multiplicity() >= 2:
            out.append(s)
    return out


def delta(h: SupportSet) -> int:
    """Sum of ``m (m - 1) / 2`` over the infinitely near points of ``h``."""
    total = 0
    stack = [as_plane_curve(h)]
    steps = 0
    while stack:
        cur = stack.pop()
        tau = cur.multiplicity()
        if tau < 2:
            continue
        steps += 1
        if steps > MAX_BLOWUPS:
            raise ValueError(f"curve {h} did not resolve; is it reduced?")
        total += tau * (tau - 1) // 2
        stack.extend(strict_transforms(cur))
    return total


def curve_measure(points) -> int:
    return sum(delta(p) for p in points)

