"""
Polynomial generator matrices G(D) over F_{q²} and the checks a convolutional
code needs before it can feed a stabilizer construction.

A generator is stored as a κ x n x (μ+1) ``galois`` array over F_{q²}, the
last axis running over powers of D.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

import galois
import numpy as np

from .config import Budgets
from .errors import BudgetExceeded, PreconditionError
from .gf import FieldTower, Level


def _is_zero(a: galois.FieldArray) -> bool:
    return not a.view(np.ndarray).any()


def _as_matrix(GF: type[galois.FieldArray], rows) -> galois.FieldArray:
    m = np.asarray(rows, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1 if m.size else 0, -1)
    return GF(m)


@dataclass(frozen=True, eq=False)
class PolyGenerator:
    """A κ x n matrix of polynomials in D."""

    tower: FieldTower = field(repr=False)
    coeffs: galois.FieldArray

    def __post_init__(self):
        c = self.field(np.asarray(self.coeffs, dtype=np.int64))
        if c.ndim != 3:
            raise PreconditionError("generator coefficients must be κ x n x (μ+1)")
        while c.shape[2] > 1 and _is_zero(c[:, :, -1]):
            c = c[:, :, :-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def field(self) -> type[galois.FieldArray]:
        return self.tower.bridge(Level.QUADRATIC).field

    @property
    def kappa(self) -> int:
        return self.coeffs.shape[0]

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    @property
    def row_degrees(self) -> tuple[int, ...]:
        """γᵢ = max_j deg g_ij (0 for a zero row)."""
        used = self.coeffs.view(np.ndarray).any(axis=1)
        return tuple(int(np.flatnonzero(row)[-1]) if row.any() else 0 for row in used)

    @property
    def memory(self) -> int:
        return max(self.row_degrees, default=0)

    @property
    def degree(self) -> int:
        return sum(self.row_degrees)

    def term(self, u: int) -> galois.FieldArray:
        """Coefficient matrix of D^u."""
        if u >= self.coeffs.shape[2]:
            return self.field.Zeros(self.coeffs.shape[:2])
        return self.coeffs[:, :, u]

    def at(self, x) -> galois.FieldArray:
        """G(x) for a field element x."""
        x = self.field(x)
        out = self.term(0).copy()
        for u in range(1, self.coeffs.shape[2]):
            out = out + x**u * self.term(u)
        return out

    def entry(self, i: int, j: int) -> galois.Poly:
        return galois.Poly(self.coeffs[i, j], order="asc")


def split_and_build(tower: FieldTower, base, *higher) -> PolyGenerator:
    """G(D) = H̃₀ + H̃₁·D + ... with each Hᵤ padded by zero rows at the bottom to κ = rows(H₀)."""
    if not higher:
        raise PreconditionError("need at least one part beyond the constant term")
    GF = tower.bridge(Level.QUADRATIC).field
    parts = [_as_matrix(GF, part) for part in (base, *higher)]
    kappa, n = parts[0].shape
    coeffs = GF.Zeros((kappa, n, len(parts)))
    for u, part in enumerate(parts):
        if part.size and part.shape[1] != n:
            raise PreconditionError(f"part {u} has {part.shape[1]} columns, expected {n}")
        if part.shape[0] > kappa:
            raise PreconditionError(
                f"part {u} has {part.shape[0]} rows, more than κ = {kappa}"
            )
        if part.size:
            coeffs[: part.shape[0], :, u] = part
    if _is_zero(parts[-1]):
        raise PreconditionError("the top part is zero, so the memory would collapse")
    return PolyGenerator(tower, coeffs)


def leading_coefficient_matrix(G: PolyGenerator) -> galois.FieldArray:
    """Row i holds the D^{γᵢ} coefficients of row i."""
    degrees = np.array(G.row_degrees, dtype=np.int64)
    return G.coeffs[np.arange(G.kappa), :, degrees]


class MinorGcd(NamedTuple):
    gcd: galois.Poly
    minors: int

    @property
    def unit(self) -> bool:
        return self.gcd.degree == 0 and int(self.gcd.coeffs[0]) == 1


def _monic(f: galois.Poly) -> galois.Poly:
    return galois.Poly(f.coeffs / f.coeffs[0])


def minor_gcd(G: PolyGenerator, budgets: Budgets | None = None) -> MinorGcd:
    """Monic gcd of the κ x κ minors, folded in column-lexicographic order.

    Each minor has degree at most γ, so it is evaluated at γ + 1 points and
    interpolated. The fold stops once the gcd is a unit.

    Raises:
        BudgetExceeded: the gcd is still not a unit after the minor budget.
    """
    budgets = budgets or Budgets()
    GF = G.field
    zero = galois.Poly.Zero(GF)
    kappa = G.kappa
    if kappa > G.n:
        return MinorGcd(zero, 0)
    if G.degree + 1 > GF.order:
        raise PreconditionError("not enough field elements to interpolate the minors")
    points = GF(np.arange(G.degree + 1))
    evaluated = [G.at(x) for x in points]

    acc: galois.Poly | None = None
    count = 0
    for cols in itertools.combinations(range(G.n), kappa):
        if count >= budgets.minors:
            raise BudgetExceeded("maximal-minor gcd", count + 1, budgets.minors)
        count += 1
        values = GF([int(np.linalg.det(m[:, list(cols)])) for m in evaluated])
        if _is_zero(values):
            continue
        minor = galois.lagrange_poly(points, values) if points.size > 1 else galois.Poly(values)
        acc = _monic(minor) if acc is None else galois.gcd(acc, minor)
        if acc.degree == 0:
            return MinorGcd(acc, count)
    return MinorGcd(zero if acc is None else acc, count)


def is_basic(G: PolyGenerator, budgets: Budgets | None = None) -> bool:
    """The maximal minors have a unit gcd, i.e. G(D) has a polynomial right inverse."""
    return minor_gcd(G, budgets).unit


def is_reduced(G: PolyGenerator) -> bool:
    """Predictable-degree test: the leading-coefficient matrix has full row rank."""
    return int(np.linalg.matrix_rank(leading_coefficient_matrix(G))) == G.kappa


def hermitian_products(G: PolyGenerator) -> dict[int, galois.FieldArray]:
    """Coefficient of D^t in G(D)·Ĝ(D⁻¹)ᵀ for t = -μ..μ, Ĝ conjugating each coefficient."""
    conj = G.coeffs ** G.tower.q
    mu = G.coeffs.shape[2] - 1
    out = {}
    for t in range(-mu, mu + 1):
        acc = G.field.Zeros((G.kappa, G.kappa))
        for u in range(mu + 1):
            v = u - t
            if 0 <= v <= mu:
                acc = acc + G.term(u) @ conj[:, :, v].T
        out[t] = acc
    return out


def hermitian_self_orthogonal(G: PolyGenerator) -> bool:
    return all(_is_zero(m) for m in hermitian_products(G).values())


class Sandwich(NamedTuple):
    """Bounds on the dual free distance and the code's own free distance."""

    lower_perp: int
    upper_perp: int
    lower_v: int

    @property
    def pinned(self) -> bool:
        return self.lower_perp == self.upper_perp


def free_distance_sandwich(d0: int, dmu: int, d: int, d_dual: int) -> Sandwich:
    """min(d₀ + d_μ, d) ≤ d_f^⊥h ≤ d, and d_f ≥ d^⊥h."""
    return Sandwich(min(d0 + dmu, d), d, d_dual)


@dataclass(frozen=True)
class ConvCode:
    generator: PolyGenerator
    free_distance_lower: int

    @property
    def n(self) -> int:
        return self.generator.n

    @property
    def k(self) -> int:
        return self.generator.kappa

    @property
    def gamma(self) -> int:
        return self.generator.degree

    @property
    def mu(self) -> int:
        return self.generator.memory

    def params(self) -> dict[str, int]:
        return {"n": self.n, "k": self.k, "gamma": self.gamma, "mu": self.mu, "d_f_lower": self.free_distance_lower}


def generator_fragment(G: PolyGenerator) -> list[list[list[list[int]]]]:
    """Entry (i, j) as its coefficient list in D-degree order, each coefficient in F_p-coordinates."""
    indices = G.tower.bridge(Level.QUADRATIC).from_galois(G.coeffs)

    def entry(column: np.ndarray) -> list[list[int]]:
        used = np.flatnonzero(column)
        top = int(used[-1]) + 1 if used.size else 0
        return [G.tower.coordinate_list(Level.QUADRATIC, int(c)) for c in column[:top]]

    return [[entry(indices[i, j]) for j in range(G.n)] for i in range(G.kappa)]
