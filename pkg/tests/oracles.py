"""Independent reference computations used by the tests.

Nothing here imports the package's own algorithms; only plain integers and
Fractions are used, so agreement with the package is a genuine cross-check.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, prod


def frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def reid_tai_terminal(r: int, w) -> bool:
    """A 3-dimensional cyclic quotient ``1/r(w)`` is terminal iff every
    non-trivial group element has age > 1."""
    if r == 1:
        return True
    for k in range(1, r):
        age = sum(frac(Fraction(k * x, r)) for x in w)
        if age <= 1:
            return False
    return True


def _group_points(r: int, w):
    return {tuple(frac(Fraction(k * x, r)) for x in w) for k in range(r)}


def kawamata_point(r: int, w):
    """Lattice point in ``(0,1)^3`` of total ``1 + 1/r``, found by enumeration."""
    pts = [p for p in _group_points(r, w) if sum(p) == 1 + Fraction(1, r) and all(x > 0 for x in p)]
    assert len(pts) == 1, pts
    return pts[0]


def _chart_quotient(r: int, w, K, i: int):
    """The cyclic quotient at the cone ``<K, e_j, e_k>`` of the star subdivision at ``K``."""
    j, k = [x for x in range(3) if x != i]

    def coords(x):
        alpha = x[i] / K[i]
        return (frac(alpha), frac(x[j] - alpha * K[j]), frac(x[k] - alpha * K[k]))

    gens = [coords(tuple(Fraction(y * 1, r) for y in w)), coords(tuple(Fraction(int(t == i)) for t in range(3)))]
    group = {(Fraction(0),) * 3}
    frontier = list(group)
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = tuple(frac(a + b) for a, b in zip(p, g))
                if q not in group:
                    group.add(q)
                    new.append(q)
        frontier = new
    order = len(group)
    if order == 1:
        return 1, (0, 0, 0)
    for p in group:
        mult = {tuple(frac(c * x) for x in p) for c in range(order)}
        if len(mult) == order:
            return order, tuple(int(x * order) for x in p)
    raise AssertionError("chart group is not cyclic")


def toric_depth(r: int, w) -> int:
    """Number of Kawamata blowups in a resolution of ``1/r(w)``, by explicit toric charts."""
    if r == 1:
        return 0
    assert reid_tai_terminal(r, w), (r, w)
    K = kawamata_point(r, w)
    total = 1
    for i in range(3):
        rr, ww = _chart_quotient(r, w, K, i)
        total += toric_depth(rr, ww)
    return total


def smooth_blowup_chart_depth(weights) -> int:
    """Depth of the ``weights`` blowup of a smooth 3-fold point, summed over its charts."""
    total = 0
    for i, wi in enumerate(weights):
        if wi <= 1:
            continue
        gen = [1 if j == i else -weights[j] for j in range(3)]
        total += toric_depth(wi, [g % wi for g in gen])
    return total


def cube(weights, index: int, equation_weights=()) -> Fraction:
    """Self-intersection of the exceptional divisor of a weighted blowup.

    ``weights`` and ``equation_weights`` are numerators over ``index``; the
    formula is ``index^2 * prod(equation weights) / prod(weights)``.
    """
    return Fraction(index ** 2 * prod(equation_weights), prod(weights))


def eq_weight(weights, monomials) -> int:
    return min(sum(a * b for a, b in zip(weights, m)) for m in monomials)


def depth_rule(kind: str, before: int, after: int) -> bool:
    """The four depth transition rules, written as explicit admissible sets."""
    if min(before, after) < 0:
        return False
    allowed = {
        "Flip": {x for x in range(before)},
        "Flop": {before},
        "DivToCurve": ({0} if before == 0 else set(range(before))),
        "DivToPoint": set(range(before + 2)),
    }[kind]
    return after in allowed


def modular_t(m: int, n: int):
    """Smallest ``t > 0`` with ``m t = 1 (mod n)`` by search, with ``s = (m t - 1) / n``."""
    for t in range(1, n + 1):
        if (m * t - 1) % n == 0:
            return t, (m * t - 1) // n
    raise ValueError


def economic_vectors(r: int, w):
    K = kawamata_point(r, w)
    return [tuple(frac(j * x) for x in K) for j in range(1, r)]


def a_profile(r: int, w, a: int, monomials):
    vecs = economic_vectors(r, w)
    qs = [min(int(r * sum(x * e for x, e in zip(v, m))) for m in monomials) for v in vecs]
    return [Fraction(a * q + j, r) for j, q in enumerate(qs, start=1)]


def brute_a1_values(r: int, b: int, a: int, cap_single: int, cap_pair: int):
    """``a_1`` over admissible supports of one monomial (exponents ``<= cap_single``)
    and of two monomials (exponents ``<= cap_pair``) for ``1/r(1,-1,b)``."""
    w = (1, r - 1, b)
    singles = list(itertools.product(range(cap_single + 1), repeat=3))
    values = set()
    profiles = {}

    def admissible(prof):
        return all(x.denominator == 1 for x in prof) and 1 in prof

    for m in singles:
        if not any(m):
            continue
        prof = a_profile(r, w, a, [m])
        profiles[m] = prof
        if admissible(prof):
            values.add(int(prof[0]))
    small = [m for m in singles if any(m) and max(m) <= cap_pair]
    for m1, m2 in itertools.combinations(small, 2):
        prof = [min(x, y) for x, y in zip(profiles[m1], profiles[m2])]
        if admissible(prof):
            values.add(int(prof[0]))
    return values


def coprime(*xs) -> bool:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g == 1
