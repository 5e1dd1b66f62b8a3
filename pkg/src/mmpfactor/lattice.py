"""Exact lattice arithmetic: fractional weight vectors, monomial supports and
cyclic quotient lattices.

Every quantity is a :class:`fractions.Fraction` or an ``int``; nothing here
touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence

Rational = Fraction
Monomial = tuple[int, ...]

AMBIENT_DIMS = (3, 4, 5)


class DimensionError(ValueError):
    pass


class EmptySupportError(ValueError):
    pass


def _rational(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, eq=False)
class WeightVector:
    """The fractional vector ``1/index * (b_1, ..., b_n)``.

    Equality and hashing are by value, so ``(2,2,4)/2 == (1,1,2)/1``.
    Zero entries are allowed; callers that need a genuine point blowup check
    positivity themselves.
    """

    numerators: tuple[int, ...]
    index: int = 1

    def __post_init__(self):
        nums = tuple(int(b) for b in self.numerators)
        object.__setattr__(self, "numerators", nums)
        if self.index <= 0:
            raise ValueError(f"index must be positive, got {self.index}")
        if any(b < 0 for b in nums):
            raise ValueError(f"weights must be non-negative, got {nums}")
        if len(nums) not in AMBIENT_DIMS:
            raise DimensionError(f"ambient dimension {len(nums)} not in {AMBIENT_DIMS}")

    @classmethod
    def of(cls, *numerators: int, index: int = 1) -> "WeightVector":
        return cls(tuple(numerators), index)

    @classmethod
    def from_entries(cls, entries: Sequence) -> "WeightVector":
        """Build from rational entries, using the least common denominator."""
        fracs = [_rational(e) for e in entries]
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        return cls(tuple(int(f * den) for f in fracs), den)

    @property
    def dim(self) -> int:
        return len(self.numerators)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(b, self.index) for b in self.numerators)

    @property
    def total(self) -> Fraction:
        return Fraction(sum(self.numerators), self.index)

    def reduced(self) -> "WeightVector":
        """Same vector with ``gcd(b_1, ..., b_n, r) == 1``."""
        g = self.index
        for b in self.numerators:
            g = gcd(g, b)
        return WeightVector(tuple(b // g for b in self.numerators), self.index // g)

    def is_positive(self) -> bool:
        return all(b > 0 for b in self.numerators)

    def __eq__(self, other):
        if not isinstance(other, WeightVector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other: "WeightVector") -> "WeightVector":
        _check_dims(self.dim, other.dim)
        return WeightVector.from_entries([x + y for x, y in zip(self.entries, other.entries)])

    def __str__(self):
        body = ",".join(str(b) for b in self.numerators)
        return f"({body})" if self.index == 1 else f"1/{self.index}({body})"

    __repr__ = __str__


@dataclass(frozen=True)
class SupportSet:
    """Monomial support of a germ of function; coefficients are implicitly generic."""

    monomials: frozenset
    ambient_dim: int

    def __post_init__(self):
        monos = frozenset(tuple(int(e) for e in m) for m in self.monomials)
        object.__setattr__(self, "monomials", monos)
        for m in monos:
            if len(m) != self.ambient_dim:
                raise DimensionError(
                    f"monomial {m} has length {len(m)}, expected {self.ambient_dim}"
                )
            if any(e < 0 for e in m):
                raise ValueError(f"negative exponent in {m}")

    @classmethod
    def of(cls, *monomials: Sequence[int]) -> "SupportSet":
        if not monomials:
            raise EmptySupportError("SupportSet.of needs at least one monomial")
        return cls(frozenset(tuple(m) for m in monomials), len(monomials[0]))

    @classmethod
    def from_iterable(cls, monomials: Iterable[Sequence[int]], ambient_dim: int) -> "SupportSet":
        return cls(frozenset(tuple(m) for m in monomials), ambient_dim)

    @classmethod
    def variable(cls, i: int, ambient_dim: int) -> "SupportSet":
        """The coordinate function ``x_{i+1}`` (0-based ``i``)."""
        return cls.of(tuple(1 if j == i else 0 for j in range(ambient_dim)))

    def __iter__(self) -> Iterator[Monomial]:
        return iter(sorted(self.monomials))

    def __len__(self):
        return len(self.monomials)

    def __or__(self, other: "SupportSet") -> "SupportSet":
        _check_dims(self.ambient_dim, other.ambient_dim)
        return SupportSet(self.monomials | other.monomials, self.ambient_dim)

    def multiplicity(self) -> int:
        """Order of vanishing at the origin (minimal total degree)."""
        if not self.monomials:
            raise EmptySupportError("multiplicity of an empty support")
        return min(sum(m) for m in self.monomials)

    def __str__(self):
        return "{" + ", ".join(_monomial_str(m) for m in self) + "}"


def _monomial_str(m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts) or "1"


@dataclass(frozen=True)
class QuotientLatticeSpec:
    """The lattice ``Z^n + Z * (1/r)(b_1, ..., b_n)``, weights stored mod ``r``."""

    index: int
    generator_weights: tuple[int, ...]

    def __post_init__(self):
        if self.index <= 0:
            raise ValueError(f"index must be positive, got {self.index}")
        reduced = tuple(int(b) % self.index for b in self.generator_weights)
        object.__setattr__(self, "generator_weights", reduced)

    @classmethod
    def of(cls, index: int, *weights: int) -> "QuotientLatticeSpec":
        return cls(index, tuple(weights))

    @classmethod
    def trivial(cls, dim: int) -> "QuotientLatticeSpec":
        return cls(1, (0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.generator_weights)

    def residue_vector(self, c: int) -> WeightVector:
        """``c`` times the generator, reduced into ``[0, 1)^n``."""
        r = self.index
        return WeightVector(tuple((c * b) % r for b in self.generator_weights), r)

    def __str__(self):
        return f"1/{self.index}({','.join(str(b) for b in self.generator_weights)})"


def _check_dims(a: int, b: int):
    if a != b:
        raise DimensionError(f"dimension mismatch: {a} != {b}")


def monomial_weight(v: WeightVector, m: Sequence[int]) -> Fraction:
    _check_dims(v.dim, len(m))
    return Fraction(sum(b * e for b, e in zip(v.numerators, m)), v.index)


def support_weight(v: WeightVector, s: SupportSet) -> Fraction:
    """Minimum of :func:`monomial_weight` over the support."""
    if not s.monomials:
        raise EmptySupportError("weight of an empty support")
    _check_dims(v.dim, s.ambient_dim)
    return min(monomial_weight(v, m) for m in s.monomials)


def lattice_member(v: WeightVector, q: QuotientLatticeSpec) -> bool:
    """Exhaustive residue search: is ``v - c * g`` integral for some ``c``?"""
    _check_dims(v.dim, q.dim)
    entries = v.entries
    for c in range(q.index):
        shift = q.residue_vector(c).entries
        if all((x - y).denominator == 1 for x, y in zip(entries, shift)):
            return True
    return False


def minimal_modular_inverse(m: int, n: int) -> tuple[int, int]:
    """Minimal ``t > 0`` with ``m*t = n*s + 1``; returns ``(t, s)``."""
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    if gcd(m, n) != 1:
        raise ValueError(f"gcd({m}, {n}) != 1")
    t = pow(m, -1, n)
    return t, (m * t - 1) // n
