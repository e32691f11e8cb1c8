"""
q²-cyclotomic cosets modulo rn and the defining sets of both code families.

Family I works at length n = q² + 1, family II at n = (q² + 1)/10 for
q = 10m + 3 or 10m + 7; in both, λ has order r = q + 1 and the exponents of
the roots of X^n - λ form θ = {1 + r·i mod rn : 0 ≤ i < n}. Every residue is
stored in [0, rn).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from math import gcd
from typing import Iterable

from sympy.ntheory import n_order

from .errors import ConsistencyError, PreconditionError
from .gf import prime_power


class Family(str, Enum):
    I = "I"
    II = "II"


def mult_order(a: int, m: int) -> int:
    """Smallest t ≥ 1 with a^t ≡ 1 (mod m)."""
    if m < 1:
        raise PreconditionError(f"modulus must be positive, got {m}")
    if gcd(a, m) != 1:
        raise PreconditionError(f"gcd({a}, {m}) != 1, so {a} has no order modulo {m}")
    if m == 1:
        return 1
    return int(n_order(a % m, m))


def family_ii_m(q: int) -> int:
    """m with q = 10m + 3 or 10m + 7; raises unless m ≥ 1."""
    if q % 10 not in (3, 7) or q < 13:
        raise PreconditionError(
            f"q={q} is not of the form 10m+3 or 10m+7 with m >= 1 (needs 10 | q^2+1)"
        )
    return q // 10


@dataclass(frozen=True)
class CosetContext:
    """Length, shift order and modulus for one constacyclic family at one q."""

    q: int
    n: int
    r: int
    family: Family
    modulus: int = field(init=False)
    s: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "modulus", self.r * self.n)
        object.__setattr__(self, "s", ((self.q**2 + 1) // 2) % self.modulus)
        if gcd(self.n, self.q) != 1:
            raise PreconditionError(f"gcd(n={self.n}, q={self.q}) != 1")
        if (self.q**2 - 1) % self.r:
            raise PreconditionError(f"r={self.r} does not divide q^2-1={self.q**2 - 1}")
        ell = mult_order(self.q**2, self.modulus)
        if ell != 2:
            raise PreconditionError(
                f"ord_{self.modulus}(q^2) = {ell}, the constructions need it to be 2"
            )

    @property
    def q2(self) -> int:
        return self.q * self.q

    @cached_property
    def theta(self) -> frozenset[int]:
        return frozenset((1 + self.r * i) % self.modulus for i in range(self.n))

    def canon(self, x: int) -> int:
        return x % self.modulus

    def position(self, z: int) -> int:
        """i with z = 1 + r·i (mod rn); z must lie in θ."""
        if (z - 1) % self.r:
            raise PreconditionError(f"{z} is not in theta (not 1 mod r={self.r})")
        return ((z - 1) // self.r) % self.n

    @property
    def half(self) -> int:
        """(n - 1)/2, the index offset of the family-II cosets."""
        return (self.n - 1) // 2


def context(family: Family | str, q: int) -> CosetContext:
    """The coset context of a family at a given q."""
    family = Family(family)
    p, _ = prime_power(q)
    if p == 2:
        raise PreconditionError(f"q={q} must be odd")
    if family is Family.I:
        return CosetContext(q=q, n=q * q + 1, r=q + 1, family=family)
    family_ii_m(q)
    return CosetContext(q=q, n=(q * q + 1) // 10, r=q + 1, family=family)


def cyclotomic_coset(x: int, ctx: CosetContext) -> tuple[int, ...]:
    """{x·q^{2j} mod rn : j ≥ 0}, sorted."""
    x = ctx.canon(x)
    orbit = {x}
    y = (x * ctx.q2) % ctx.modulus
    while y not in orbit:
        orbit.add(y)
        y = (y * ctx.q2) % ctx.modulus
    return tuple(sorted(orbit))


@dataclass(frozen=True)
class DefiningSet:
    """A union of q²-cyclotomic cosets inside θ, in construction order."""

    context: CosetContext
    cosets: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]
    exponents: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if len(self.cosets) != len(self.representatives):
            raise ConsistencyError("one representative per coset")
        seen: set[int] = set()
        total = 0
        for coset in self.cosets:
            seen.update(coset)
            total += len(coset)
        if total != len(seen):
            raise ConsistencyError("defining-set cosets overlap")
        object.__setattr__(self, "exponents", tuple(sorted(seen)))
        theta = self.context.theta
        for z in self.exponents:
            if z not in theta:
                raise PreconditionError(f"exponent {z} lies outside theta")
            if (z * self.context.q2) % self.context.modulus not in seen:
                raise PreconditionError(f"defining set is not closed under q^2 at {z}")

    @classmethod
    def empty(cls, ctx: CosetContext) -> DefiningSet:
        return cls(ctx, (), ())

    @classmethod
    def from_representatives(cls, ctx: CosetContext, reps: Iterable[int]) -> DefiningSet:
        reps = tuple(ctx.canon(x) for x in reps)
        return cls(ctx, tuple(cyclotomic_coset(x, ctx) for x in reps), reps)

    def __len__(self) -> int:
        return len(self.exponents)

    def __contains__(self, z: object) -> bool:
        return isinstance(z, int) and z % self.context.modulus in self.exponents

    def union(self, other: DefiningSet) -> DefiningSet:
        if other.context != self.context:
            raise PreconditionError("cannot join defining sets of different contexts")
        return DefiningSet(
            self.context,
            self.cosets + other.cosets,
            self.representatives + other.representatives,
        )

    def as_dict(self) -> dict:
        return {
            "modulus": self.context.modulus,
            "representatives": list(self.representatives),
            "cosets": [list(c) for c in self.cosets],
            "size": len(self),
        }


def defining_set_family_I(ctx: CosetContext, count: int) -> DefiningSet:
    """Z = C_s ∪ C_{s-r} ∪ ... ∪ C_{s-r·count}."""
    if ctx.family is not Family.I:
        raise PreconditionError("family-I defining set needs a family-I context")
    top = (ctx.q - 1) // 2
    if not 0 <= count <= top:
        raise PreconditionError(f"delta={count} outside 0 <= delta <= (q-1)/2 = {top}")
    return DefiningSet.from_representatives(ctx, (ctx.s - ctx.r * b for b in range(count + 1)))


def defining_set_family_II(ctx: CosetContext, count: int) -> DefiningSet:
    """Z = ∪_{j=0..count} C_{s - r((n-1)/2 - j)}."""
    if ctx.family is not Family.II:
        raise PreconditionError("family-II defining set needs a family-II context")
    top = ctx.half - 1
    if not 0 <= count <= top:
        raise PreconditionError(f"t={count} outside 0 <= t <= (n-1)/2 - 1 = {top}")
    return DefiningSet.from_representatives(
        ctx, (ctx.s - ctx.r * (ctx.half - j) for j in range(count + 1))
    )


def defining_set(ctx: CosetContext, count: int) -> DefiningSet:
    if ctx.family is Family.I:
        return defining_set_family_I(ctx, count)
    return defining_set_family_II(ctx, count)


@dataclass(frozen=True)
class ThetaDecomposition:
    context: CosetContext
    cosets: tuple[tuple[int, ...], ...]

    @property
    def singletons(self) -> list[tuple[int, ...]]:
        return [c for c in self.cosets if len(c) == 1]

    @property
    def pairs(self) -> list[tuple[int, ...]]:
        return [c for c in self.cosets if len(c) == 2]

    def as_dict(self) -> dict:
        ctx = self.context
        return {
            "family": ctx.family.value,
            "q": ctx.q,
            "n": ctx.n,
            "r": ctx.r,
            "modulus": ctx.modulus,
            "s": ctx.s,
            "size": sum(len(c) for c in self.cosets),
            "singletons": [list(c) for c in self.singletons],
            "pairs": [list(c) for c in self.pairs],
        }


def theta_decomposition(ctx: CosetContext) -> ThetaDecomposition:
    """Partition θ into cosets, ordered C_s first, and check the expected shape.

    Family I walks C_{s-rb} for b = 0..n/2; family II lists C_s and then
    C_{s-r((n-1)/2-k)} for k = 0..(n-1)/2 - 1.
    """
    if ctx.family is Family.I:
        steps = range(ctx.n // 2 + 1)
    else:
        steps = iter([0, *(ctx.half - k for k in range(ctx.half))])

    cosets: list[tuple[int, ...]] = []
    covered: set[int] = set()
    for b in steps:
        coset = cyclotomic_coset(ctx.s - ctx.r * b, ctx)
        if covered.intersection(coset):
            raise ConsistencyError(f"coset of {ctx.canon(ctx.s - ctx.r * b)} overlaps earlier cosets")
        covered.update(coset)
        cosets.append(coset)

    if covered != ctx.theta or len(covered) != ctx.n:
        raise ConsistencyError(
            f"cosets cover {len(covered)} exponents, expected theta with {ctx.n}"
        )
    singletons = sorted(c[0] for c in cosets if len(c) == 1)
    if any(len(c) > 2 for c in cosets):
        raise ConsistencyError("a coset has more than two elements")
    if ctx.family is Family.I:
        second = ctx.canon(1 + ctx.r * ((ctx.q - 1) // 2 + (ctx.q**2 + 1) // 2))
        expected = sorted({ctx.s, second})
    else:
        expected = [ctx.s]
    if singletons != expected:
        raise ConsistencyError(f"singleton cosets {singletons}, expected {expected}")
    return ThetaDecomposition(ctx, tuple(cosets))


def full_theta(ctx: CosetContext) -> DefiningSet:
    decomposition = theta_decomposition(ctx)
    return DefiningSet(ctx, decomposition.cosets, tuple(c[0] for c in decomposition.cosets))


def negate_q_image(Z: DefiningSet) -> frozenset[int]:
    """Z^{-q} = {-q·z mod rn}."""
    ctx = Z.context
    return frozenset((-ctx.q * z) % ctx.modulus for z in Z.exponents)


def is_dual_containing(Z: DefiningSet) -> bool:
    """Hermitian dual containment of the code with defining set Z: Z ∩ Z^{-q} = ∅."""
    return not (set(Z.exponents) & negate_q_image(Z))
