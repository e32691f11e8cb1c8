"""
Constacyclic block codes over F_{q²} and their distance oracles.

A code is fixed by its coset context and defining set Z. Its roots β^z live
in F_{q⁴}; the generator polynomial has coefficients in F_{q²} because Z is
q²-closed. The parity check over F_{q²} comes from one β-power row per coset
representative, each entry split into its {1, ω} coordinates, with dependent
rows dropped (earliest rows win).

Matrices and polynomials are ``galois`` arrays over the bridged fields of the
tower; process pools receive plain integer arrays and rebuild the field.
"""

from __future__ import annotations

import concurrent.futures
import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator

import galois
import numpy as np

from .config import Budgets
from .cosets import CosetContext, DefiningSet, is_dual_containing
from .errors import BudgetExceeded, ConsistencyError, DegenerateCodeError, PreconditionError
from .gf import FieldElement, FieldTower, Level, element_order, primitive_root_of_unity, tower_for

BATCH = 1 << 14
WORD_CELLS = 1 << 22


def quadratic_field(q: int) -> type[galois.FieldArray]:
    return tower_for(q).bridge(Level.QUADRATIC).field


@lru_cache(maxsize=16)
def beta_powers(ctx: CosetContext) -> galois.FieldArray:
    """β^k for k < rn over the ``galois`` copy of F_{q⁴}. Do not mutate."""
    tower = tower_for(ctx.q)
    beta = tower.bridge(Level.QUARTIC).to_galois(primitive_root_of_unity(tower, ctx.modulus).index)
    return beta ** np.arange(ctx.modulus, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class ConstacyclicCode:
    """An ideal of F_{q²}[X]/(X^n - λ) with its parity-check data."""

    ctx: CosetContext
    Z: DefiningSet
    tower: FieldTower
    beta: FieldElement
    lam: FieldElement
    genpoly: galois.Poly
    check_poly: galois.Poly
    check_raw: galois.FieldArray
    check_expanded: galois.FieldArray
    row_origin: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def k(self) -> int:
        return self.ctx.n - len(self.Z)

    @property
    def field(self) -> type[galois.FieldArray]:
        return self.tower.bridge(Level.QUADRATIC).field

    def rows_of_coset(self, position: int) -> galois.FieldArray:
        """Expanded check rows that came from the coset at this construction position."""
        keep = [i for i, origin in enumerate(self.row_origin) if origin == position]
        return self.check_expanded[keep]

    def __repr__(self) -> str:
        return f"ConstacyclicCode(q={self.ctx.q}, [{self.n}, {self.k}], |Z|={len(self.Z)})"


def parity_check_raw(ctx: CosetContext, Z: DefiningSet) -> galois.FieldArray:
    """Rows (β^{z·j})_{j<n} over F_{q⁴}, one per coset representative, in construction order."""
    powers = beta_powers(ctx)
    reps = np.array(Z.representatives, dtype=np.int64).reshape(-1, 1)
    return powers[(reps * np.arange(ctx.n, dtype=np.int64)) % ctx.modulus]


def independent_rows(matrix: galois.FieldArray) -> list[int]:
    """Indices of the earliest rows spanning the row space.

    They are the pivot columns of the reduced row echelon form of the transpose.
    """
    if matrix.size == 0:
        return []
    reduced = matrix.T.row_reduce().view(np.ndarray)
    return [int(np.flatnonzero(row)[0]) for row in reduced if row.any()]


def expand_check(
    tower: FieldTower, raw: galois.FieldArray, expected_rank: int
) -> tuple[galois.FieldArray, tuple[int, ...]]:
    """Split each raw row into its two F_{q²} coordinate rows, keep the earliest independent rows."""
    q2 = tower.quadratic.size
    indices = tower.bridge(Level.QUARTIC).from_galois(raw)
    stacked = np.empty((2 * raw.shape[0], raw.shape[1]), dtype=np.int64)
    stacked[0::2] = indices % q2
    stacked[1::2] = indices // q2
    expanded = tower.bridge(Level.QUADRATIC).to_galois(stacked)
    keep = independent_rows(expanded)
    if len(keep) != expected_rank:
        raise ConsistencyError(
            f"expanded parity check has rank {len(keep)}, expected |Z| = {expected_rank}"
        )
    return expanded[keep], tuple(i // 2 for i in keep)


def binomial(GF: type[galois.FieldArray], n: int, lam: galois.FieldArray) -> galois.Poly:
    """X^n - λ."""
    coeffs = GF.Zeros(n + 1)
    coeffs[0] = 1
    coeffs[-1] = -lam
    return galois.Poly(coeffs)


def generator_polynomial(tower: FieldTower, roots: galois.FieldArray) -> galois.Poly:
    """∏ (X - root) over F_{q⁴}, brought down to F_{q²}.

    Raises:
        PreconditionError: a coefficient lies outside F_{q²}.
    """
    quadratic = tower.bridge(Level.QUADRATIC)
    if roots.size == 0:
        return galois.Poly.One(quadratic.field)
    coeffs = tower.bridge(Level.QUARTIC).from_galois(galois.Poly.Roots(roots).coeffs)
    if (coeffs >= tower.quadratic.size).any():
        raise PreconditionError("generator polynomial has coefficients outside F_{q^2}")
    return galois.Poly(quadratic.to_galois(coeffs))


def build_code(ctx: CosetContext, Z: DefiningSet) -> ConstacyclicCode:
    if Z.context != ctx:
        raise PreconditionError("defining set belongs to a different context")
    tower = tower_for(ctx.q)
    quartic = tower.bridge(Level.QUARTIC)
    powers = beta_powers(ctx)
    beta = FieldElement(tower, Level.QUARTIC, int(quartic.from_galois(powers[1 % ctx.modulus])))
    lam_index = int(quartic.from_galois(powers[ctx.n % ctx.modulus]))
    if lam_index >= tower.quadratic.size:
        raise ConsistencyError("β^n does not lie in F_{q^2}")
    lam = FieldElement(tower, Level.QUADRATIC, lam_index)
    if element_order(lam) != ctx.r:
        raise ConsistencyError(f"λ has order {element_order(lam)}, expected r={ctx.r}")

    quadratic = tower.bridge(Level.QUADRATIC)
    g = generator_polynomial(tower, powers[list(Z.exponents)])
    h, remainder = divmod(binomial(quadratic.field, ctx.n, quadratic.to_galois(lam_index)), g)
    if remainder != galois.Poly.Zero(quadratic.field):
        raise ConsistencyError("generator polynomial does not divide X^n - λ")

    raw = parity_check_raw(ctx, Z)
    if len(Z):
        expanded, origin = expand_check(tower, raw, len(Z))
    else:
        expanded, origin = quadratic.field.Zeros((0, ctx.n)), ()
    return ConstacyclicCode(
        ctx=ctx,
        Z=Z,
        tower=tower,
        beta=beta,
        lam=lam,
        genpoly=g,
        check_poly=h,
        check_raw=raw,
        check_expanded=expanded,
        row_origin=origin,
    )


def random_codeword(code: ConstacyclicCode, rng: random.Random) -> galois.FieldArray:
    """m(X)·g(X) for a random message of degree < k."""
    GF = code.field
    message = galois.Poly(GF([rng.randrange(GF.order) for _ in range(code.k)] or [0]), order="asc")
    word = (message * code.genpoly).coeffs[::-1]
    out = GF.Zeros(code.n)
    out[: word.size] = word
    return out


def conjugate(matrix: galois.FieldArray, q: int) -> galois.FieldArray:
    """Entrywise x ↦ x^q."""
    if matrix.size == 0:
        return matrix.copy()
    return matrix**q


def hermitian_dual_generator(code: ConstacyclicCode) -> galois.FieldArray:
    return conjugate(code.check_expanded, code.ctx.q)


def full_column_rank(stack: galois.FieldArray) -> np.ndarray:
    """For a B x m x w stack, whether each m x w matrix has rank w.

    Gaussian elimination run on the whole batch at once with field-array arithmetic.
    """
    m = stack.copy()
    count, rows, width = m.shape
    ok = np.ones(count, dtype=bool)
    if width > rows:
        return ~ok
    idx = np.arange(count)
    for c in range(width):
        nonzero = m[:, c:, c].view(np.ndarray) != 0
        ok &= nonzero.any(axis=1)
        pivot = c + nonzero.argmax(axis=1)
        top = m[idx, c].copy()
        m[idx, c] = m[idx, pivot]
        m[idx, pivot] = top
        lead = m[idx, c, c].copy()
        lead[lead.view(np.ndarray) == 0] = 1
        m[idx, c] = m[idx, c] / lead[:, None]
        if c + 1 < rows:
            m[:, c + 1 :] = m[:, c + 1 :] - m[:, c + 1 :, c, None] * m[:, c, None, :]
    return ok


def bch_lower_bound(Z: DefiningSet) -> int:
    """One more than the longest cyclic run of consecutive θ-positions in Z."""
    ctx = Z.context
    positions = {ctx.position(z) for z in Z.exponents}
    if not positions:
        return 1
    if len(positions) == ctx.n:
        return ctx.n + 1
    longest = 0
    for start in positions:
        if (start - 1) % ctx.n in positions:
            continue
        length = 0
        while (start + length) % ctx.n in positions:
            length += 1
        longest = max(longest, length)
    return longest + 1


@dataclass(frozen=True)
class DistanceInterval:
    lower: int
    upper: int

    @property
    def pinned(self) -> bool:
        return self.lower == self.upper

    def __str__(self) -> str:
        return str(self.lower) if self.pinned else f"[{self.lower}, {self.upper}]"


def distance_interval(Z: DefiningSet) -> DistanceInterval:
    """[BCH bound, Singleton bound] for the code with defining set Z."""
    return DistanceInterval(bch_lower_bound(Z), len(Z) + 1)


def _subsets(n: int, w: int, first: int) -> Iterator[np.ndarray]:
    rest = itertools.combinations(range(first + 1, n), w - 1)
    while True:
        chunk = list(itertools.islice(rest, BATCH))
        if not chunk:
            return
        cols = np.empty((len(chunk), w), dtype=np.int64)
        cols[:, 0] = first
        if w > 1:
            cols[:, 1:] = np.array(chunk, dtype=np.int64)
        yield cols


def _dependent_subset(q: int, check: np.ndarray, w: int, first: int) -> tuple[int, ...] | None:
    matrix = quadratic_field(q)(check)
    for cols in _subsets(check.shape[1], w, first):
        ok = full_column_rank(np.transpose(matrix[:, cols], (1, 0, 2)))
        if not ok.all():
            return tuple(int(c) for c in cols[int(np.argmin(ok))])
    return None


def find_dependent_columns(
    code: ConstacyclicCode, w: int, budgets: Budgets | None = None, workers: int = 1
) -> tuple[int, ...] | None:
    """A set of w linearly dependent check columns, or None if every w columns are independent.

    Raises:
        PreconditionError: w is negative or exceeds n.
        BudgetExceeded: C(n, w) is above the rank budget.
    """
    budgets = budgets or Budgets()
    n = code.n
    if not 0 <= w <= n:
        raise PreconditionError(f"w={w} outside 0..n={n}")
    if w == 0:
        return None
    check = code.check_expanded.view(np.ndarray)
    if w > check.shape[0]:
        return tuple(range(w))
    required = comb(n, w)
    if required > budgets.ranks:
        raise BudgetExceeded("column-subset rank oracle", required, budgets.ranks)

    firsts = range(n - w + 1)
    if workers <= 1:
        for first in firsts:
            found = _dependent_subset(code.ctx.q, check, w, first)
            if found is not None:
                return found
        return None

    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_dependent_subset, code.ctx.q, check, w, a) for a in firsts]
        witnesses = [f.result() for f in futures]
    return next((wit for wit in witnesses if wit is not None), None)


def certify_distance_columns(
    code: ConstacyclicCode, w: int, budgets: Budgets | None = None, workers: int = 1
) -> bool:
    """True iff every w columns of the expanded check are independent (so d > w)."""
    return find_dependent_columns(code, w, budgets, workers) is None


def minimum_distance_by_columns(code: ConstacyclicCode, budgets: Budgets | None = None) -> int:
    """Smallest w with w dependent check columns."""
    for w in range(1, code.check_expanded.shape[0] + 2):
        if not certify_distance_columns(code, w, budgets):
            return w
    raise ConsistencyError("every column subset is independent past the row count")


def codimension_two_distance(code: ConstacyclicCode) -> int:
    """Exact distance for a code with at most two check rows."""
    check = code.check_expanded
    rows, n = check.shape
    if rows == 0:
        raise DegenerateCodeError("the full space has distance 1 only by convention")
    if rows > 2:
        raise PreconditionError(f"codimension {rows} > 2")
    nonzero = check.view(np.ndarray) != 0
    if not nonzero.any(axis=0).all():
        return 1
    lead = check[nonzero.argmax(axis=0), np.arange(n)]
    normalised = (check / lead[None, :]).view(np.ndarray)
    distinct = {tuple(int(v) for v in normalised[:, j]) for j in range(n)}
    if len(distinct) < n:
        return 2
    return rows + 1


def _min_weight(base: galois.FieldArray, rows: galois.FieldArray) -> int:
    """Minimum weight of base + Σ c_j rows_j over all coefficient vectors."""
    elements = type(base).elements
    words = base[None, :]
    for row in rows:
        multiples = elements[:, None] * row[None, :]
        words = (words[:, None, :] + multiples[None, :, :]).reshape(-1, base.size)
    return int((words.view(np.ndarray) != 0).sum(axis=1).min())


def _dual_chunk(q: int, gen: np.ndarray, lead: int, prefix: tuple[int, ...]) -> int:
    GF = quadratic_field(q)
    rows = GF(gen)
    base = rows[lead].copy()
    fixed = rows[lead + 1 : lead + 1 + len(prefix)]
    for c, row in zip(prefix, fixed):
        base = base + GF(c) * row
    return _min_weight(base, rows[lead + 1 + len(prefix) :])


def _dual_chunks(m: int, size: int, n: int) -> Iterator[tuple[int, tuple[int, ...]]]:
    inner = 0
    while size ** (inner + 1) * n <= WORD_CELLS:
        inner += 1
    for lead in range(m):
        trailing = m - lead - 1
        fixed = max(0, trailing - inner)
        for prefix in itertools.product(range(size), repeat=fixed):
            yield lead, prefix


def dual_distance_exhaustive(
    code: ConstacyclicCode, budgets: Budgets | None = None, workers: int = 1
) -> int:
    """Minimum weight of the Hermitian dual, enumerating words with leading coefficient 1.

    Raises:
        DegenerateCodeError: the dual is {0}.
        BudgetExceeded: more projective words than the word budget.
    """
    budgets = budgets or Budgets()
    gen = hermitian_dual_generator(code)
    m = gen.shape[0]
    if m == 0:
        raise DegenerateCodeError("Hermitian dual of the full space is {0}")
    size = code.field.order
    required = (size**m - 1) // (size - 1)
    if required > budgets.words:
        raise BudgetExceeded("dual codeword enumeration", required, budgets.words)

    q = code.ctx.q
    gen = gen.view(np.ndarray)
    chunks = list(_dual_chunks(m, size, code.n))
    if workers <= 1:
        best = code.n
        for lead, prefix in chunks:
            best = min(best, _dual_chunk(q, gen, lead, prefix))
            if best == 1:
                break
        return best
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_dual_chunk, q, gen, lead, prefix) for lead, prefix in chunks]
        return min(f.result() for f in futures)


def verify_dual_containing_codewords(code: ConstacyclicCode) -> bool:
    """Every q-conjugated check row reduces to zero modulo g(X)."""
    zero = galois.Poly.Zero(code.field)
    return all(
        galois.Poly(row, order="asc") % code.genpoly == zero
        for row in hermitian_dual_generator(code)
    )


def dual_containment_agrees(code: ConstacyclicCode) -> bool:
    return verify_dual_containing_codewords(code) == is_dual_containing(code.Z)


def matrix_fragment(code: ConstacyclicCode) -> dict:
    """Certificate fragment: coefficients as coordinate vectors over F_p."""
    tower = code.tower
    quadratic = tower.bridge(Level.QUADRATIC)

    def coords(index: int, level: Level = Level.QUADRATIC) -> list[int]:
        return tower.coordinate_list(level, int(index))

    return {
        "n": code.n,
        "k": code.k,
        "beta": coords(code.beta.index, Level.QUARTIC),
        "lambda": coords(code.lam.index),
        "genpoly": [coords(c) for c in quadratic.from_galois(code.genpoly.coeffs[::-1])],
        "check_expanded": [[coords(v) for v in row] for row in quadratic.from_galois(code.check_expanded)],
        "row_origin": list(code.row_origin),
    }
