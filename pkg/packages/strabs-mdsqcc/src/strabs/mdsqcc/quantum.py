"""
Quantum convolutional stabilizer parameters and construction certificates.

``construct`` runs one (family, q, i) instance through the whole pipeline:
coset decomposition, the block codes C ⊃ C₀ and C₁, the split generator
G(D) = N₀ + N₁·D, the convolutional checks and the distance sandwich, and
records every check it executed in a :class:`QccCertificate`.
"""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import partial
from math import floor
from typing import Iterator

from . import block, conv
from .config import Budgets, VerificationLevel
from .cosets import (
    DefiningSet,
    Family,
    context,
    defining_set,
    family_ii_m,
    is_dual_containing,
    theta_decomposition,
)
from .errors import BudgetExceeded, PreconditionError
from .gf import prime_power, tower_for
from .runner import Job, PoolConfig, run_jobs

ERRATUM_TABLE_Q13 = (
    "The published family-II table lists q=13 for n=137 and 2 <= i <= 5; "
    "n=137 and that i-range belong to q=37 = 10*3+7, since q=13 gives n=17 and m=1."
)
ERRATUM_FREE_DISTANCE = (
    "The classical free distance of V is stated both as >= n-2i+1 and as >= n-2i-1; "
    "the weaker n-2i-1 is used, which still exceeds 2i+3 for every admissible i."
)


@dataclass(frozen=True)
class QccParams:
    """[(n, k, μ; γ, d_f)]_q."""

    n: int
    k: int
    mu: int
    gamma: int
    d_f: int
    q: int

    def __post_init__(self):
        if self.k < 0 or min(self.n, self.mu, self.gamma, self.d_f) < 0 or self.n < 1:
            raise PreconditionError(f"invalid quantum parameters {self}")

    def __str__(self) -> str:
        return f"[({self.n}, {self.k}, {self.mu}; {self.gamma}, {self.d_f})]_{self.q}"

    def as_dict(self) -> dict[str, int]:
        return {"n": self.n, "k": self.k, "mu": self.mu, "gamma": self.gamma, "d_f": self.d_f}


def quantum_singleton_bound(n: int, k: int, gamma: int) -> int:
    """⌊(n-k)/2 · (⌊2γ/(n+k)⌋ + 1) + γ + 1⌋."""
    if not n > k >= 0:
        raise PreconditionError(f"need n > k >= 0, got n={n}, k={k}")
    value = Fraction(n - k, 2) * ((2 * gamma) // (n + k) + 1) + gamma + 1
    return floor(value)


def is_mds(params: QccParams) -> bool:
    return params.d_f == quantum_singleton_bound(params.n, params.k, params.gamma)


def stabilizer_params(classical: conv.ConvCode, d_f_pinned: int, q: int) -> QccParams:
    """Stabilizer parameters from a Hermitian self-orthogonal (n, κ, γ; μ) code.

    Raises:
        PreconditionError: the code's own free-distance bound does not exceed
            d_f_pinned, so d_f cannot be read off the dual alone.
    """
    if classical.free_distance_lower <= d_f_pinned:
        raise PreconditionError(
            f"weight separation fails: wt(V) >= {classical.free_distance_lower} "
            f"does not exceed wt(V^perp_h) = {d_f_pinned}"
        )
    return QccParams(
        n=classical.n,
        k=classical.n - 2 * classical.k,
        mu=classical.mu,
        gamma=classical.gamma,
        d_f=d_f_pinned,
        q=q,
    )


def _check_q(q: int) -> None:
    p, _ = prime_power(q)
    if p == 2:
        raise PreconditionError(f"q={q} must be an odd prime power")


def family_bounds(family: Family | str, q: int) -> tuple[int, int]:
    """Admissible i-range (inclusive) for the given family at q."""
    family = Family(family)
    _check_q(q)
    if family is Family.I:
        if q < 5:
            raise PreconditionError(f"family I needs q >= 5, got q={q}")
        return 2, (q - 1) // 2
    m = family_ii_m(q)
    if m < 2:
        raise PreconditionError(
            f"family II needs q = 10m+3 or 10m+7 with m >= 2; q={q} gives m={m}, so the i-range is empty"
        )
    return 2, 2 * m - 1


def check_range(family: Family | str, q: int, i: int) -> None:
    lo, hi = family_bounds(family, q)
    bound = "(q-1)/2" if Family(family) is Family.I else "2m-1"
    if i < lo:
        raise PreconditionError(f"i={i} violates i >= {lo}")
    if i > hi:
        raise PreconditionError(f"i={i} violates i <= {bound} = {hi}")


def formula_params(family: Family | str, q: int, i: int) -> QccParams:
    """Closed-form parameters: [(n, n-4i+2, 1; 2, 2i+2)] or [(n, n-4i, 1; 2, 2i+3)]."""
    check_range(family, q, i)
    if Family(family) is Family.I:
        n = q * q + 1
        return QccParams(n=n, k=n - 4 * i + 2, mu=1, gamma=2, d_f=2 * i + 2, q=q)
    n = (q * q + 1) // 10
    return QccParams(n=n, k=n - 4 * i, mu=1, gamma=2, d_f=2 * i + 3, q=q)


def weight_separation(family: Family | str, q: int, i: int) -> tuple[int, int]:
    """(lower bound on wt(V), wt(V^⊥h)) from the closed forms."""
    p = formula_params(family, q, i)
    if Family(family) is Family.I:
        return p.n - 2 * i, p.d_f
    return p.n - 2 * i - 1, p.d_f


class CheckStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIPPED = "SKIPPED"


@dataclass(frozen=True)
class CheckResult:
    status: CheckStatus
    detail: str
    level: VerificationLevel

    def as_dict(self) -> dict[str, str]:
        return {"status": self.status.value, "detail": self.detail}


@dataclass
class QccCertificate:
    """Evidence bundle for one construction."""

    family: Family
    q: int
    i: int
    params: QccParams
    level: VerificationLevel
    checks: dict[str, CheckResult] = field(default_factory=dict)
    tower: dict = field(default_factory=dict)
    defining_sets: dict = field(default_factory=dict)
    erratum_notes: list[str] = field(default_factory=list)
    timings_ms: dict[str, float] = field(default_factory=dict)
    matrices: dict | None = None

    def record(self, name: str, passed: bool, detail: str, level: VerificationLevel) -> None:
        status = CheckStatus.PASS if passed else CheckStatus.FAIL
        self.checks[name] = CheckResult(status, detail, level)

    def skip(self, name: str, detail: str, level: VerificationLevel) -> None:
        self.checks[name] = CheckResult(CheckStatus.SKIPPED, detail, level)

    @property
    def singleton_bound(self) -> int:
        return quantum_singleton_bound(self.params.n, self.params.k, self.params.gamma)

    @property
    def mds(self) -> bool:
        return is_mds(self.params)

    @property
    def valid(self) -> bool:
        for result in self.checks.values():
            if result.status is CheckStatus.FAIL:
                return False
            if result.status is CheckStatus.SKIPPED and result.level <= self.level:
                return False
        return self.params == formula_params(self.family, self.q, self.i)

    def to_dict(self) -> dict:
        out = {
            "family": self.family.value,
            "q": self.q,
            "i": self.i,
            "params": self.params.as_dict(),
            "singleton_bound": self.singleton_bound,
            "mds": self.mds,
            "checks": {name: r.as_dict() for name, r in self.checks.items()},
            "tower": self.tower,
            "defining_sets": self.defining_sets,
            "erratum_notes": self.erratum_notes,
            "level": int(self.level),
            "timings_ms": self.timings_ms,
            "valid": self.valid,
        }
        if self.matrices is not None:
            out["matrices"] = self.matrices
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


@contextmanager
def _stage(cert: QccCertificate, name: str, enabled: bool) -> Iterator[None]:
    start = time.perf_counter()
    yield
    if enabled:
        cert.timings_ms[name] = round((time.perf_counter() - start) * 1000, 3)


def construct(
    family: Family | str,
    q: int,
    i: int,
    level: VerificationLevel | int = VerificationLevel.ALGEBRAIC,
    budgets: Budgets | None = None,
    workers: int = 1,
    timings: bool = False,
    matrices: bool = False,
) -> QccCertificate:
    """Build and certify one quantum convolutional code.

    Raises:
        PreconditionError: q or i is outside the family's hypotheses.
        BudgetExceeded: a level-2 oracle would exceed its budget.
    """
    family = Family(family)
    level = VerificationLevel(int(level))
    budgets = budgets or Budgets()
    expected = formula_params(family, q, i)
    ctx = context(family, q)
    Z = defining_set(ctx, i)
    Z0 = defining_set(ctx, i - 1)
    Z1 = DefiningSet.from_representatives(ctx, [Z.representatives[-1]])

    cert = QccCertificate(family=family, q=q, i=i, params=expected, level=level)
    cert.tower = tower_for(q).describe()
    cert.defining_sets = {"C": Z.as_dict(), "C0": Z0.as_dict(), "C1": Z1.as_dict()}
    if family is Family.II:
        cert.erratum_notes.append(ERRATUM_FREE_DISTANCE)
        if q == 37:
            cert.erratum_notes.append(ERRATUM_TABLE_Q13)

    L0, L1, L2 = VerificationLevel
    wt_v, wt_dual = weight_separation(family, q, i)
    cert.record("weight_separation", wt_v > wt_dual, f"wt(V) >= {wt_v} > {wt_dual}", L0)

    if level >= L1:
        _algebraic(cert, ctx, Z, Z0, Z1, budgets, timings, matrices)
    else:
        for name in ALGEBRAIC_CHECKS:
            cert.skip(name, "closed-form level", L1)

    if level >= L2:
        _exhaustive(cert, ctx, Z, budgets, workers, timings)
    else:
        for name in EXHAUSTIVE_CHECKS:
            cert.skip(name, "needs level 2", L2)

    cert.record(
        "formula_agreement",
        cert.params == expected,
        f"{cert.params} vs closed form {expected}",
        L0,
    )
    cert.record(
        "singleton_equality",
        cert.mds,
        f"d_f = {cert.params.d_f}, bound = {cert.singleton_bound}",
        L0,
    )
    return cert


construct_family_I = partial(construct, Family.I)
construct_family_II = partial(construct, Family.II)


ALGEBRAIC_CHECKS = (
    "coset_decomposition",
    "dual_containment_cosets",
    "dual_containment_codewords",
    "bch_distance",
    "c0_distance",
    "c1_distance",
    "dual_distance",
    "basic",
    "reduced",
    "hermitian_self_orthogonal",
    "degree_memory",
    "sandwich_pin",
)
EXHAUSTIVE_CHECKS = ("column_oracle", "dual_distance_exhaustive")


def _algebraic(cert, ctx, Z, Z0, Z1, budgets, timings, matrices) -> None:
    L1 = VerificationLevel.ALGEBRAIC
    i = cert.i
    with _stage(cert, "cosets", timings):
        decomposition = theta_decomposition(ctx)
        cert.record(
            "coset_decomposition",
            True,
            f"{len(decomposition.singletons)} singletons, {len(decomposition.pairs)} pairs",
            L1,
        )

    with _stage(cert, "block", timings):
        code = block.build_code(ctx, Z)
        c1 = block.build_code(ctx, Z1)
        criterion = is_dual_containing(Z)
        membership = block.verify_dual_containing_codewords(code)
        cert.record("dual_containment_cosets", criterion, "Z and Z^-q disjoint", L1)
        cert.record(
            "dual_containment_codewords",
            membership and membership == criterion,
            "conjugated check rows reduce to 0 modulo g(X)",
            L1,
        )
        d = block.distance_interval(Z)
        d0 = block.distance_interval(Z0)
        cert.record("bch_distance", d.pinned, f"d(C) = {d} for [{code.n}, {code.k}]", L1)
        cert.record("c0_distance", d0.pinned, f"d(C0) = {d0}", L1)
        d1 = block.codimension_two_distance(c1)
        cert.record("c1_distance", d1 >= 2, f"d(C1) = {d1}", L1)
        # the dual of an MDS code is MDS
        d_dual = code.n - len(Z) + 1
        cert.record("dual_distance", d.pinned, f"d(C^perp_h) = {d_dual} from the MDS dual", L1)

    with _stage(cert, "conv", timings):
        n0 = code.check_expanded[[k for k, o in enumerate(code.row_origin) if o < i]]
        n1 = code.rows_of_coset(i)
        G = conv.split_and_build(code.tower, n0, n1)
        gcd = conv.minor_gcd(G, budgets)
        cert.record("basic", gcd.unit, f"minor gcd is a unit after {gcd.minors} minors", L1)
        cert.record("reduced", conv.is_reduced(G), "leading-coefficient matrix has full rank", L1)
        cert.record("hermitian_self_orthogonal", conv.hermitian_self_orthogonal(G), "all Laurent products vanish", L1)
        cert.record(
            "degree_memory",
            G.degree == 2 and G.memory == 1,
            f"kappa={G.kappa}, gamma={G.degree}, mu={G.memory}, row degrees {list(G.row_degrees)}",
            L1,
        )
        sandwich = conv.free_distance_sandwich(d0.lower, d1, d.lower, d_dual)
        cert.record(
            "sandwich_pin",
            sandwich.pinned,
            f"min({d0.lower}+{d1}, {d.lower}) <= d_f^perp_h <= {d.lower}; d_f(V) >= {d_dual}",
            L1,
        )
        V = conv.ConvCode(G, free_distance_lower=d_dual)
        cert.params = stabilizer_params(V, sandwich.lower_perp, cert.q)

    if matrices:
        cert.matrices = {"C": block.matrix_fragment(code), "G": conv.generator_fragment(G)}


def _exhaustive(cert, ctx, Z, budgets, workers, timings) -> None:
    L2 = VerificationLevel.EXHAUSTIVE
    code = block.build_code(ctx, Z)
    w = len(Z)
    with _stage(cert, "column_oracle", timings):
        ok = block.certify_distance_columns(code, w, budgets, workers)
        cert.record("column_oracle", ok, f"every {w} check columns independent, so d >= {w + 1}", L2)
    with _stage(cert, "dual_distance", timings):
        found = block.dual_distance_exhaustive(code, budgets, workers)
        expected = code.n - w + 1
        cert.record("dual_distance_exhaustive", found == expected, f"minimum dual weight {found}, expected {expected}", L2)


TABLE_COLUMNS = ("q", "i", "n", "k", "mu", "gamma", "d_f", "singleton", "mds", "valid", "note")


def table_row(cert: QccCertificate) -> dict:
    p = cert.params
    note = "published table prints q=13 for this row" if ERRATUM_TABLE_Q13 in cert.erratum_notes else ""
    return {
        "q": cert.q,
        "i": cert.i,
        "n": p.n,
        "k": p.k,
        "mu": p.mu,
        "gamma": p.gamma,
        "d_f": p.d_f,
        "singleton": cert.singleton_bound,
        "mds": cert.mds,
        "valid": cert.valid,
        "note": note,
    }


def _warning_row(q: int, i: int | str, message: str) -> dict:
    row: dict = {column: "" for column in TABLE_COLUMNS}
    row.update(q=q, i=i, valid=False, note=message)
    return row


def table_rows(
    family: Family | str,
    q_list: list[int],
    level: VerificationLevel | int = VerificationLevel.ALGEBRAIC,
    budgets: Budgets | None = None,
    pool: PoolConfig | None = None,
    i_range: tuple[int, int] | None = None,
) -> list[dict]:
    """One row per admissible (q, i), sorted by q then i; inadmissible q become warning rows."""
    family = Family(family)
    budgets = budgets or Budgets()
    slots: list[dict | int] = []
    jobs: list[Job] = []
    for q in sorted(set(q_list)):
        try:
            lo, hi = family_bounds(family, q)
        except PreconditionError as e:
            slots.append(_warning_row(q, "", f"skipped: {e}"))
            continue
        if i_range is not None:
            lo, hi = max(lo, i_range[0]), min(hi, i_range[1])
        for i in range(lo, hi + 1):
            slots.append(len(jobs))
            jobs.append(
                Job(
                    f"i={i}",
                    construct,
                    (family, q, i),
                    {"level": level, "budgets": budgets},
                    group=f"family {family.value}, q={q}",
                )
            )
    results = run_jobs(jobs, pool)
    rows = []
    for slot in slots:
        if isinstance(slot, dict):
            rows.append(slot)
            continue
        result = results[slot]
        job = jobs[slot]
        if result.ok:
            rows.append(table_row(result.value))
        else:
            _, q, i = job.args
            if isinstance(result.error, BudgetExceeded):
                raise result.error
            rows.append(_warning_row(q, i, f"failed: {result.error}"))
    return rows
