"""
Exact arithmetic in the tower F_q ⊂ F_{q²} ⊂ F_{q⁴} for odd prime powers q = p^e.

Each level is a quadratic extension of the one below (F_q itself is F_p[x]/(f)
when e > 1). An element is a coordinate vector over F_p; the vector is packed
into a single integer ``index = Σ coords[k] · p^k`` with the coordinates of the
lower level first, so the embeddings F_q → F_{q²} → F_{q⁴} leave the index
unchanged and F_{q²}-coordinates of a quartic element are ``(index % q², index // q²)``.

F_q and F_{q²} are small enough to tabulate (log/antilog lists plus Q x Q
numpy tables for scalar work). F_{q⁴} is never tabulated; it
multiplies pairs over the F_{q²} tables.

Matrix and polynomial work runs in ``galois``: ``FieldTower.bridge`` maps the
F_{q²} and F_{q⁴} levels onto isomorphic ``galois`` fields and back.
"""

from __future__ import annotations

import itertools
import random
from math import gcd
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property, lru_cache
from typing import Callable, Iterator, Protocol

import galois
import numpy as np
import sympy

from .errors import PreconditionError


class Level(IntEnum):
    """Tower level, valued by its degree over F_q."""

    BASE = 1
    QUADRATIC = 2
    QUARTIC = 4


class Arithmetic(Protocol):
    """Scalar operations on packed element indices."""

    p: int
    size: int

    def add(self, a: int, b: int) -> int: ...
    def sub(self, a: int, b: int) -> int: ...
    def neg(self, a: int) -> int: ...
    def mul(self, a: int, b: int) -> int: ...
    def inv(self, a: int) -> int: ...
    def pow(self, a: int, k: int) -> int: ...


def _digits(index: int, p: int, width: int) -> tuple[int, ...]:
    out = []
    for _ in range(width):
        index, d = divmod(index, p)
        out.append(d)
    return tuple(out)


class FieldLevel:
    """A tabulated finite field of ``p**degree`` elements.

    ``raw_mul`` multiplies packed indices from first principles; it is only
    used while the tables are built.
    """

    def __init__(self, p: int, degree: int, raw_mul: Callable[[int, int], int]):
        self.p = p
        self.degree = degree
        self.size = p**degree
        self.order = self.size - 1

        powers = p ** np.arange(degree, dtype=np.int64)
        self.digits = (np.arange(self.size, dtype=np.int64)[:, None] // powers) % p
        self._powers = powers

        self.generator, exp = self._find_generator(raw_mul)
        self._exp = exp + exp
        self._log = [-1] * self.size
        for k, x in enumerate(exp):
            self._log[x] = k

        log = np.array(self._log, dtype=np.int64)
        exp_arr = np.array(exp, dtype=np.int64)
        mul = exp_arr[(log[:, None] + log[None, :]) % self.order]
        mul[0, :] = 0
        mul[:, 0] = 0
        self.mul_table = mul.astype(np.int32)

        add = np.zeros((self.size, self.size), dtype=np.int64)
        for k in range(degree):
            d = self.digits[:, k]
            add += ((d[:, None] + d[None, :]) % p) * powers[k]
        self.add_table = add.astype(np.int32)

        self.neg_table = (((p - self.digits) % p) @ powers).astype(np.int32)
        inv = exp_arr[(-log) % self.order]
        inv[0] = 0
        self.inv_table = inv.astype(np.int32)
        self.log_table = log

    def _find_generator(self, raw_mul: Callable[[int, int], int]) -> tuple[int, list[int]]:
        if self.size == 2:
            return 1, [1]
        for g in range(2, self.size):
            seq = [1]
            x = g
            while x != 1:
                seq.append(x)
                x = raw_mul(x, g)
                if len(seq) > self.order:
                    break
            if len(seq) == self.order:
                return g, seq
        raise AssertionError(f"no generator found for a field of size {self.size}")

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._exp[(self.order - self._log[a]) % self.order]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("zero has no inverse")
            return 1 if k == 0 else 0
        return self._exp[(self._log[a] * k) % self.order]

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def exp(self, k: int) -> int:
        return self._exp[k % self.order]

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        return self.order // gcd(self._log[a], self.order)

    def pack(self, digits: np.ndarray) -> np.ndarray:
        """Recombine base-p digit arrays (last axis) into indices."""
        return (digits @ self._powers).astype(np.int64)


class QuadraticExtension:
    """Arithmetic on pairs a + b·ω over a tabulated level, ω² + c1·ω + c0 = 0."""

    def __init__(self, base: FieldLevel, c0: int, c1: int):
        self.base = base
        self.c0 = c0
        self.c1 = c1
        self.p = base.p
        self.degree = 2 * base.degree
        self.size = base.size**2
        self.order = self.size - 1

    def split(self, x: int) -> tuple[int, int]:
        return x % self.base.size, x // self.base.size

    def join(self, a: int, b: int) -> int:
        return a + self.base.size * b

    def add(self, x: int, y: int) -> int:
        a0, a1 = self.split(x)
        b0, b1 = self.split(y)
        return self.join(self.base.add(a0, b0), self.base.add(a1, b1))

    def neg(self, x: int) -> int:
        a0, a1 = self.split(x)
        return self.join(self.base.neg(a0), self.base.neg(a1))

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        s = self.base
        a0, a1 = self.split(x)
        b0, b1 = self.split(y)
        hi = s.mul(a1, b1)
        lo = s.sub(s.mul(a0, b0), s.mul(self.c0, hi))
        mid = s.sub(s.add(s.mul(a0, b1), s.mul(a1, b0)), s.mul(self.c1, hi))
        return self.join(lo, mid)

    def pow(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv(x), -k
        result = 1
        while k:
            if k & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            k >>= 1
        return result

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(x, self.order - 1)

    def element_order(self, x: int) -> int:
        if x == 0:
            raise ValueError("zero has no multiplicative order")
        order = self.order
        for prime in sympy.factorint(self.order):
            while order % prime == 0 and self.pow(x, order // prime) == 1:
                order //= prime
        return order


class GaloisBridge:
    """Isomorphism between one tower level and a ``galois`` field.

    The ``galois`` field is defined by the minimal polynomial of a generator g
    of the level, with x as its primitive element, so g maps to x. Packed
    indices convert by a change of F_p-basis from the p^k digits to powers of g.
    """

    def __init__(self, p: int, degree: int, generator_powers: list[int], tabulate: bool = False):
        self.p = p
        self.degree = degree
        self.prime = galois.GF(p)
        self._weights = p ** np.arange(degree, dtype=np.int64)

        digits = self.prime(self._digits(np.array(generator_powers, dtype=np.int64)))
        # row k holds the digits of g^k
        self.basis = digits[:degree]
        self.inverse = np.linalg.inv(self.basis)
        tail = digits[degree] @ self.inverse
        self.minimal_poly = galois.Poly([1, *(int(c) for c in -tail[::-1])], field=self.prime)
        self.field = galois.GF(p**degree, irreducible_poly=self.minimal_poly, primitive_element=p)

        self._forward: np.ndarray | None = None
        self._backward: np.ndarray | None = None
        if tabulate:
            forward = self._to_galois(np.arange(p**degree, dtype=np.int64)).view(np.ndarray)
            backward = np.empty_like(forward)
            backward[forward] = np.arange(forward.size, dtype=forward.dtype)
            self._forward, self._backward = forward, backward

    def __repr__(self) -> str:
        return f"GaloisBridge({self.field.name}, minimal_poly={self.minimal_poly})"

    def _digits(self, indices: np.ndarray) -> np.ndarray:
        return (indices[..., None] // self._weights) % self.p

    def _to_galois(self, flat: np.ndarray) -> galois.FieldArray:
        coeffs = self.prime(self._digits(flat)) @ self.inverse
        return self.field.Vector(coeffs[:, ::-1])

    def to_galois(self, indices) -> galois.FieldArray:
        """Packed indices to field elements of the same shape."""
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size == 0:
            return self.field.Zeros(idx.shape)
        if self._forward is not None:
            return self.field(self._forward[idx])
        return self._to_galois(idx.reshape(-1)).reshape(idx.shape)

    def from_galois(self, values) -> np.ndarray:
        """Field elements back to packed indices of the same shape."""
        arr = self.field(values)
        if arr.size == 0:
            return np.zeros(arr.shape, dtype=np.int64)
        if self._backward is not None:
            return self._backward[arr.view(np.ndarray)].astype(np.int64)
        coeffs = arr.reshape(-1).vector()[:, ::-1]
        digits = (coeffs @ self.basis).view(np.ndarray).astype(np.int64)
        return (digits @ self._weights).reshape(arr.shape)


def _prime_mul(p: int) -> Callable[[int, int], int]:
    return lambda a, b: (a * b) % p


def _poly_mulmod(p: int, f: tuple[int, ...]) -> Callable[[int, int], int]:
    """Multiplication in F_p[x]/(f) on packed coefficient indices, f monic."""
    e = len(f) - 1

    def mul(a: int, b: int) -> int:
        da = _digits(a, p, e)
        db = _digits(b, p, e)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                for j in range(e + 1):
                    prod[k - e + j] = (prod[k - e + j] - c * f[j]) % p
        return sum(prod[k] * p**k for k in range(e))

    return mul


def _quadratic_mul(sub: FieldLevel, c0: int, c1: int) -> Callable[[int, int], int]:
    return QuadraticExtension(sub, c0, c1).mul


def _has_root(level: FieldLevel, c0: int, c1: int) -> bool:
    xs = np.arange(level.size)
    sq = level.mul_table[xs, xs]
    value = level.add_table[level.add_table[sq, level.mul_table[c1, xs]], c0]
    return bool((value == 0).any())


def smallest_irreducible_quadratic(level: FieldLevel) -> tuple[int, int]:
    """Smallest monic X² + c1·X + c0 without roots, (c0, c1) in lexicographic order."""
    for c0 in range(1, level.size):
        for c1 in range(level.size):
            if not _has_root(level, c0, c1):
                return c0, c1
    raise AssertionError("every quadratic has a root")


def smallest_irreducible_prime_poly(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree e over F_p, coefficients lowest first."""
    x = sympy.Symbol("x")
    for low in itertools.product(range(p), repeat=e):
        if low[0] == 0:
            continue
        coeffs = (*low, 1)
        if sympy.Poly(list(reversed(coeffs)), x, modulus=p).is_irreducible:
            return coeffs
    raise AssertionError(f"no irreducible polynomial of degree {e} over F_{p}")


class FieldTower:
    """The tower F_q ⊂ F_{q²} ⊂ F_{q⁴}; immutable once built."""

    def __init__(self, p: int, e: int):
        self.p = p
        self.e = e
        self.q = p**e

        if e == 1:
            base_poly: tuple[int, ...] = ()
            self.base = FieldLevel(p, 1, _prime_mul(p))
        else:
            base_poly = smallest_irreducible_prime_poly(p, e)
            self.base = FieldLevel(p, e, _poly_mulmod(p, base_poly))

        q_c0, q_c1 = smallest_irreducible_quadratic(self.base)
        self.quadratic = FieldLevel(p, 2 * e, _quadratic_mul(self.base, q_c0, q_c1))

        r_c0, r_c1 = smallest_irreducible_quadratic(self.quadratic)
        self.quartic = QuadraticExtension(self.quadratic, r_c0, r_c1)

        self.irreducibles: dict[Level, tuple[int, ...]] = {
            Level.BASE: base_poly,
            Level.QUADRATIC: (q_c0, q_c1, 1),
            Level.QUARTIC: (r_c0, r_c1, 1),
        }

    def __repr__(self) -> str:
        return f"FieldTower(p={self.p}, e={self.e})"

    def arithmetic(self, level: Level) -> Arithmetic:
        if level is Level.BASE:
            return self.base
        if level is Level.QUADRATIC:
            return self.quadratic
        return self.quartic  # type: ignore[return-value]

    def size(self, level: Level) -> int:
        return self.q ** int(level)

    def element(self, level: Level, value: int | tuple[int, ...] | list[int]) -> FieldElement:
        """Element from a packed index or a coordinate vector over F_p."""
        if isinstance(value, int):
            index = value
        else:
            width = int(level) * self.e
            if len(value) != width:
                raise ValueError(f"expected {width} coordinates, got {len(value)}")
            index = sum((c % self.p) * self.p**k for k, c in enumerate(value))
        if not 0 <= index < self.size(level):
            raise ValueError(f"index {index} outside level {level.name}")
        return FieldElement(self, level, index)

    def zero(self, level: Level = Level.QUADRATIC) -> FieldElement:
        return FieldElement(self, level, 0)

    def one(self, level: Level = Level.QUADRATIC) -> FieldElement:
        return FieldElement(self, level, 1)

    @property
    def omega(self) -> FieldElement:
        """The root adjoined at the top step; {1, ω} is the F_{q²}-basis of F_{q⁴}."""
        return FieldElement(self, Level.QUARTIC, self.quadratic.size)

    def random_element(self, level: Level, rng: random.Random, nonzero: bool = False) -> FieldElement:
        low = 1 if nonzero else 0
        return FieldElement(self, level, rng.randrange(low, self.size(level)))

    def elements(self, level: Level) -> Iterator[FieldElement]:
        for index in range(self.size(level)):
            yield FieldElement(self, level, index)

    @cached_property
    def quartic_generator(self) -> int:
        """Smallest packed index generating F_{q⁴}*."""
        order = self.quartic.order
        primes = list(sympy.factorint(order))
        for g in range(2, self.quartic.size):
            if all(self.quartic.pow(g, order // prime) != 1 for prime in primes):
                return g
        raise AssertionError("F_{q^4}* has no generator")

    @cached_property
    def _bridges(self) -> dict[Level, GaloisBridge]:
        quad, quartic = self.quadratic, self.quartic
        g = self.quartic_generator
        return {
            Level.QUADRATIC: GaloisBridge(
                self.p,
                quad.degree,
                [quad.pow(quad.generator, k) for k in range(quad.degree + 1)],
                tabulate=True,
            ),
            Level.QUARTIC: GaloisBridge(
                self.p, quartic.degree, [quartic.pow(g, k) for k in range(quartic.degree + 1)]
            ),
        }

    def bridge(self, level: Level) -> GaloisBridge:
        """The ``galois`` copy of F_{q²} or F_{q⁴}."""
        if level is Level.BASE:
            raise ValueError("only the F_{q^2} and F_{q^4} levels have a galois bridge")
        return self._bridges[level]

    def coordinate_list(self, level: Level, index: int) -> list[int]:
        return list(_digits(index, self.p, int(level) * self.e))

    def describe(self) -> dict:
        """Certificate fragment: defining polynomials as coordinate lists, lowest degree first."""
        below = {Level.QUADRATIC: Level.BASE, Level.QUARTIC: Level.QUADRATIC}
        irreducibles: dict[str, list] = {"base": list(self.irreducibles[Level.BASE])}
        for level in (Level.QUADRATIC, Level.QUARTIC):
            irreducibles[level.name.lower()] = [
                self.coordinate_list(below[level], c) for c in self.irreducibles[level]
            ]
        return {"p": self.p, "e": self.e, "irreducibles": irreducibles}


@dataclass(frozen=True)
class FieldElement:
    """An element of one tower level; ``coords`` are its F_p-coordinates."""

    tower: FieldTower = field(compare=False, repr=False)
    level: Level
    index: int

    @property
    def coords(self) -> tuple[int, ...]:
        return _digits(self.index, self.tower.p, int(self.level) * self.tower.e)

    @property
    def arithmetic(self) -> Arithmetic:
        return self.tower.arithmetic(self.level)

    def is_zero(self) -> bool:
        return self.index == 0

    def __bool__(self) -> bool:
        return self.index != 0

    def in_level(self, level: Level) -> bool:
        return self.index < self.tower.size(level)

    def embed(self, level: Level) -> FieldElement:
        if level < self.level and self.index >= self.tower.size(level):
            raise ValueError(f"{self} does not lie in level {level.name}")
        return FieldElement(self.tower, level, self.index)

    def _coerce(self, other: FieldElement | int) -> tuple[Level, int, int]:
        if isinstance(other, int):
            other = self.tower.element(Level.BASE, other % self.tower.p)
        level = max(self.level, other.level)
        return level, self.index, other.index

    def __add__(self, other: FieldElement | int) -> FieldElement:
        level, a, b = self._coerce(other)
        return FieldElement(self.tower, level, self.tower.arithmetic(level).add(a, b))

    __radd__ = __add__

    def __sub__(self, other: FieldElement | int) -> FieldElement:
        level, a, b = self._coerce(other)
        return FieldElement(self.tower, level, self.tower.arithmetic(level).sub(a, b))

    def __rsub__(self, other: FieldElement | int) -> FieldElement:
        return (-self) + other

    def __neg__(self) -> FieldElement:
        return FieldElement(self.tower, self.level, self.arithmetic.neg(self.index))

    def __mul__(self, other: FieldElement | int) -> FieldElement:
        level, a, b = self._coerce(other)
        return FieldElement(self.tower, level, self.tower.arithmetic(level).mul(a, b))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        return FieldElement(self.tower, self.level, self.arithmetic.inv(self.index))

    def __truediv__(self, other: FieldElement | int) -> FieldElement:
        level, a, b = self._coerce(other)
        arith = self.tower.arithmetic(level)
        return FieldElement(self.tower, level, arith.mul(a, arith.inv(b)))

    def __pow__(self, k: int) -> FieldElement:
        return FieldElement(self.tower, self.level, self.arithmetic.pow(self.index, k))

    def __repr__(self) -> str:
        return f"FieldElement({self.level.name}, {list(self.coords)})"


@lru_cache(maxsize=None)
def make_tower(p: int, e: int) -> FieldTower:
    """Build (and cache) the tower for q = p^e."""
    if not sympy.isprime(p):
        raise PreconditionError(f"p={p} is not prime")
    if p == 2:
        raise PreconditionError("characteristic 2 is not supported; q must be odd")
    if e < 1:
        raise PreconditionError(f"exponent e={e} must be positive")
    return FieldTower(p, e)


def prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, e) with q = p^e, or raise."""
    factors = sympy.factorint(q) if q > 1 else {}
    if len(factors) != 1:
        raise PreconditionError(f"q={q} is not a prime power")
    ((p, e),) = factors.items()
    return int(p), int(e)


def tower_for(q: int) -> FieldTower:
    return make_tower(*prime_power(q))


def element_order(x: FieldElement) -> int:
    if x.is_zero():
        raise PreconditionError("zero has no multiplicative order")
    return x.arithmetic.element_order(x.index)  # type: ignore[attr-defined]


def primitive_root_of_unity(tower: FieldTower, n: int) -> FieldElement:
    """β of exact order n in F_{q⁴}: g^((q⁴-1)/n) for the smallest generator g."""
    order = tower.quartic.order
    if n < 1 or order % n:
        raise PreconditionError(f"N={n} does not divide q^4-1={order}")
    if n == 1:
        return tower.one(Level.QUARTIC)
    index = tower.quartic.pow(tower.quartic_generator, order // n)
    return FieldElement(tower, Level.QUARTIC, index)


def frobenius_q(x: FieldElement, power: int = 1) -> FieldElement:
    """x ↦ x^(q^power)."""
    return x ** (x.tower.q**power)


def expand_over_subfield(
    x: FieldElement, basis: tuple[FieldElement, FieldElement] | None = None
) -> tuple[FieldElement, FieldElement]:
    """Coordinates (a, b) in F_{q²} with x = a·basis₀ + b·basis₁.

    The default basis {1, ω} makes this a projection of the packed index.
    """
    tower = x.tower
    if x.level is not Level.QUARTIC:
        x = x.embed(Level.QUARTIC)
    quad = tower.quadratic
    x0, x1 = tower.quartic.split(x.index)
    if basis is None:
        return (FieldElement(tower, Level.QUADRATIC, x0), FieldElement(tower, Level.QUADRATIC, x1))

    u0, u1 = tower.quartic.split(basis[0].embed(Level.QUARTIC).index)
    v0, v1 = tower.quartic.split(basis[1].embed(Level.QUARTIC).index)
    det = quad.sub(quad.mul(u0, v1), quad.mul(u1, v0))
    if det == 0:
        raise PreconditionError("basis is linearly dependent over F_{q^2}")
    det_inv = quad.inv(det)
    a = quad.mul(quad.sub(quad.mul(x0, v1), quad.mul(x1, v0)), det_inv)
    b = quad.mul(quad.sub(quad.mul(u0, x1), quad.mul(u1, x0)), det_inv)
    return FieldElement(tower, Level.QUADRATIC, a), FieldElement(tower, Level.QUADRATIC, b)
