"""Weighted blowup bookkeeping.

Discrepancies come from adjunction (sum of weights minus the weights of the
defining equations minus one).  The pullback coefficients, the induced
discrepancy ``(a q + n) / p`` of the contraction obtained from the two-ray
game, and the inequalities that make ``-K_{Y/W}`` nef are all plain exact
arithmetic over :class:`~fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .lattice import (
    DimensionError,
    QuotientLatticeSpec,
    SupportSet,
    WeightVector,
    lattice_member,
    support_weight,
)
from .singularity import PointGerm, SingularityClass


class NonIntegralPullback(ValueError):
    pass


@dataclass(frozen=True)
class BlowupData:
    center: PointGerm
    weights: WeightVector
    discrepancy: Fraction
    equation_weights: tuple[Fraction, ...] = ()

    def __post_init__(self):
        expected = self.weights.total - sum(self.equation_weights, Fraction(0)) - 1
        if expected != self.discrepancy:
            raise ValueError(
                f"discrepancy {self.discrepancy} does not match adjunction value {expected}"
            )

    @property
    def terminal_target(self) -> bool:
        return self.discrepancy > 0


@dataclass(frozen=True)
class IntersectionData:
    """Intersection numbers and pullback coefficients entering the nef test.

    ``n`` and ``a`` describe ``f: X -> W`` (index of ``P``, discrepancy ``a/n``),
    ``p`` and ``b`` describe ``g: Y -> X`` (index of ``Q``, discrepancy ``b/p``).
    """

    E_cubed: Fraction
    F_cubed: Fraction
    c0: int
    q0: int
    frak_q: int
    n: int
    p: int
    a: int
    b: int = 1

    def __post_init__(self):
        for name in ("c0", "q0", "frak_q", "n", "p", "a", "b"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.E_cubed <= 0 or self.F_cubed <= 0:
            raise ValueError("E^3 and F^3 must be positive")


@dataclass(frozen=True)
class CurveClass:
    K_degree: Fraction
    E_degree: Fraction
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be at least 1")


class InducedDiscrepancy(NamedTuple):
    value: Fraction
    is_positive_integer: bool


def _check_germ_dims(germ: PointGerm, v: WeightVector):
    if germ.ambient_dim != v.dim:
        raise DimensionError(f"weights {v} do not fit a germ in C^{germ.ambient_dim}")


def equation_weights(germ: PointGerm, v: WeightVector) -> tuple[Fraction, ...]:
    _check_germ_dims(germ, v)
    return tuple(support_weight(v, eq) for eq in germ.equations)


def adjunction_discrepancy(germ: PointGerm, v: WeightVector) -> Fraction:
    """``sum(v) - sum(wt_v(f_k)) - 1``; zero weights allowed (curve blowups)."""
    return v.total - sum(equation_weights(germ, v), Fraction(0)) - 1


def wb_discrepancy(germ: PointGerm, v: WeightVector) -> Fraction:
    if not v.is_positive():
        raise ValueError(f"weighted point blowup needs positive weights, got {v}")
    return adjunction_discrepancy(germ, v)


def weighted_blowup(germ: PointGerm, v: WeightVector, allow_zero: bool = False) -> BlowupData:
    if not allow_zero and not v.is_positive():
        raise ValueError(f"weighted point blowup needs positive weights, got {v}")
    eq_w = equation_weights(germ, v)
    return BlowupData(germ, v, v.total - sum(eq_w, Fraction(0)) - 1, eq_w)


def pullback_mult(divisor_germ: SupportSet, v: WeightVector, p: int) -> int:
    """The integer ``q`` with ``g^* E = E_Y + (q/p) F``."""
    value = p * support_weight(v, divisor_germ)
    if value.denominator != 1 or value <= 0:
        raise NonIntegralPullback(f"p * wt = {value} is not a positive integer")
    return int(value)


def induced_discrepancy(a: int, n: int, frak_q: int, p: int) -> InducedDiscrepancy:
    if min(a, n, frak_q, p) <= 0:
        raise ValueError("induced_discrepancy needs positive inputs")
    value = Fraction(a * frak_q + n, p)
    return InducedDiscrepancy(value, value.denominator == 1 and value > 0)


def T_full(d: IntersectionData) -> Fraction:
    return (Fraction(-d.a * d.c0, d.n ** 2) * d.E_cubed
            + Fraction(d.q0 * d.frak_q * d.b, d.p ** 3) * d.F_cubed)


def nef_ok(d: IntersectionData) -> bool:
    return T_full(d) <= 0 and d.b * d.c0 - d.a * d.q0 <= 0


def T_two_ray(a: int, n: int, E_cubed: Fraction, frak_q: int, p: int, F_cubed: Fraction) -> Fraction:
    """``-a^2/n^2 E^3 + q/p^3 F^3``, the quantity that must be negative in the corollary form."""
    return Fraction(-a * a, n * n) * E_cubed + Fraction(frak_q, p ** 3) * F_cubed


def F_correction(frak_q: int, p: int, F_cubed: Fraction) -> Fraction:
    return Fraction(frak_q, p ** 3) * F_cubed


def small_F_check(frak_q: int, p: int, F_cubed: Fraction) -> bool:
    return F_correction(frak_q, p, F_cubed) < Fraction(1, p)


def curve_negativity(l: CurveClass, frak_q: int, p: int, F_cubed: Fraction) -> Fraction:
    """Upper bound ``l.K_X + q F^3 / p^3`` for ``l_Y . K_Y``."""
    return l.K_degree + F_correction(frak_q, p, F_cubed)


# --- affine charts -------------------------------------------------------


def chart(germ: PointGerm, v: WeightVector, i: int,
          cls: Optional[SingularityClass] = None) -> PointGerm:
    """Germ at the origin of the ``i``-th chart of the weighted blowup of ``germ`` by ``v``.

    Only index-one germs and integral weights are handled.  The chart is
    ``C^n / (1/v_i)(-v_1, ..., 1, ..., -v_n)`` and a monomial ``x^m`` of an
    equation ``f`` becomes ``x^m`` with the ``i``-th exponent replaced by
    ``v.m - wt_v(f)``.
    """
    if germ.index != 1 or v.index != 1:
        raise ValueError("charts are only computed over index-one germs with integral weights")
    _check_germ_dims(germ, v)
    w = v.numerators
    if w[i] <= 0:
        raise ValueError(f"chart {i} of {v} has non-positive weight")
    r = w[i]
    gen = tuple(1 if j == i else -w[j] for j in range(v.dim))
    new_eqs = []
    for eq in germ.equations:
        wt = support_weight(v, eq)
        monos = []
        for m in eq.monomials:
            e = list(m)
            e[i] = int(sum(a * b for a, b in zip(w, m)) - wt)
            monos.append(tuple(e))
        if any(sum(m) == 0 for m in monos):
            raise ValueError(f"chart {i} origin does not lie on the proper transform of {eq}")
        new_eqs.append(SupportSet.from_iterable(monos, v.dim))
    q = QuotientLatticeSpec(r, gen)
    out = PointGerm(cls or SingularityClass.SMOOTH, q, tuple(new_eqs))
    if cls is None:
        out = PointGerm(_auto_class(out), q, tuple(new_eqs))
    return out


def linear_variables(eq: SupportSet) -> list[int]:
    return [m.index(1) for m in eq.monomials if sum(m) == 1]


def eliminate_linear(germ: PointGerm) -> PointGerm:
    """Drop equations with a linear term together with one linear variable.

    Only applied when that variable occurs in no other equation, which is
    the situation of every chart this package computes.
    """
    eqs = list(germ.equations)
    weights = list(germ.quotient.generator_weights)
    changed = True
    while changed:
        changed = False
        for k, eq in enumerate(eqs):
            for j in linear_variables(eq):
                if any(m[j] for other in eqs if other is not eq for m in other.monomials):
                    continue
                rest = [o for o in eqs if o is not eq]
                dim = len(weights) - 1
                eqs = [SupportSet.from_iterable((m[:j] + m[j + 1:] for m in o.monomials), dim)
                       for o in rest]
                weights = weights[:j] + weights[j + 1:]
                changed = True
                break
            if changed:
                break
    q = QuotientLatticeSpec(germ.index, tuple(weights))
    if eqs:
        return PointGerm(germ.cls, q, tuple(eqs))
    kind = SingularityClass.SMOOTH if germ.index == 1 else SingularityClass.CYCLIC_QUOTIENT
    return PointGerm(kind, q)


def _auto_class(germ: PointGerm) -> SingularityClass:
    reduced_eqs = germ.equations
    if all(linear_variables(eq) for eq in reduced_eqs):
        return SingularityClass.SMOOTH if germ.index == 1 else SingularityClass.CYCLIC_QUOTIENT
    return SingularityClass.CA if germ.index == 1 else SingularityClass.CA_OVER_R


def in_lattice_of(germ: PointGerm, v: WeightVector) -> bool:
    return lattice_member(v, germ.quotient)
