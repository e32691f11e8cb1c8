"""
Invariant suites for ``mdsqcc verify``.

A suite file (YAML) lists suites by kind; each suite expands into cases, one
job per case, run on the job pool. A case returns ``(passed, detail)``; a
case whose oracle would exceed its budget is reported as SKIP.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import yaml

from . import block
from .config import Budgets, VerificationLevel
from .cosets import (
    Family,
    context,
    defining_set,
    is_dual_containing,
    theta_decomposition,
)
from .errors import BudgetExceeded, PreconditionError, QccError
from .gf import Level, expand_over_subfield, frobenius_q, prime_power, tower_for
from .quantum import construct, family_bounds, formula_params, is_mds
from .runner import Job, PoolConfig, run_jobs

CaseResult = tuple[bool, str]


@dataclass
class Suite:
    name: str
    kind: str
    level: VerificationLevel
    spec: dict[str, Any]


@dataclass
class SuiteCheck:
    suite: str
    name: str
    status: str
    detail: str

    def as_dict(self) -> dict[str, str]:
        return {"suite": self.suite, "name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class SuiteReport:
    checks: list[SuiteCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != "FAIL" for c in self.checks)

    def counts(self) -> dict[str, int]:
        out = {"PASS": 0, "FAIL": 0, "SKIP": 0}
        for check in self.checks:
            out[check.status] += 1
        return out

    def as_dict(self) -> dict:
        return {"ok": self.ok, "counts": self.counts(), "checks": [c.as_dict() for c in self.checks]}


@dataclass(frozen=True)
class VerifySettings:
    level: VerificationLevel = VerificationLevel.ALGEBRAIC
    budgets: Budgets = field(default_factory=Budgets)
    q: int | None = None
    max_q: int = 47
    seed: int = 20150617
    samples: int = 1000


def default_suite_path() -> Path:
    return Path(str(resources.files("strabs.mdsqcc").joinpath("suites/default.yaml")))


def load_suites(path: Path | None = None) -> tuple[list[Suite], int]:
    """Suites from a YAML file, plus its sample count."""
    path = path or default_suite_path()
    try:
        data = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError) as e:
        raise PreconditionError(f"cannot read suite file {path}: {e}") from e
    if not isinstance(data, dict) or "suites" not in data:
        raise PreconditionError(f"suite file {path} has no 'suites' list")
    suites = []
    for entry in data["suites"]:
        kind = entry.get("kind")
        if kind not in CASE_BUILDERS:
            raise PreconditionError(f"unknown suite kind {kind!r} in {path}")
        suites.append(
            Suite(
                name=entry.get("name", kind),
                kind=kind,
                level=VerificationLevel(int(entry.get("level", 1))),
                spec=entry,
            )
        )
    return suites, int(data.get("samples", 1000))


def _is_odd_prime_power(q: int) -> bool:
    try:
        return prime_power(q)[0] != 2
    except PreconditionError:
        return False


def admissible_qs(family: Family, limit: int) -> list[int]:
    out = []
    for q in range(3, limit + 1):
        if not _is_odd_prime_power(q):
            continue
        try:
            family_bounds(family, q)
        except PreconditionError:
            continue
        out.append(q)
    return out


def _rng(seed: int, *key: object) -> random.Random:
    return random.Random(":".join(str(k) for k in (seed, *key)))


# -- case functions ------------------------------------------------------------


def field_axioms_case(q: int, samples: int, seed: int) -> CaseResult:
    tower = tower_for(q)
    rng = _rng(seed, "axioms", q)
    for level in Level:
        zero, one = tower.zero(level), tower.one(level)
        for _ in range(samples):
            x, y, z = (tower.random_element(level, rng) for _ in range(3))
            if (x + y) + z != x + (y + z) or (x * y) * z != x * (y * z):
                return False, f"associativity fails at level {level.name}: {x}, {y}, {z}"
            if x * (y + z) != x * y + x * z:
                return False, f"distributivity fails at level {level.name}: {x}, {y}, {z}"
            if x + zero != x or x * one != x or x - x != zero:
                return False, f"identities fail at level {level.name}: {x}"
            if x and x * x.inverse() != one:
                return False, f"inverse fails at level {level.name}: {x}"
            if level is not Level.QUARTIC:
                up = Level(int(level) * 2)
                if (x + y).embed(up) != x.embed(up) + y.embed(up) or (x * y).embed(up) != x.embed(up) * y.embed(up):
                    return False, f"embedding {level.name} -> {up.name} is not a homomorphism at {x}, {y}"
    return True, f"{samples} random triples per level"


def frobenius_case(q: int, samples: int, seed: int) -> CaseResult:
    tower = tower_for(q)
    rng = _rng(seed, "frobenius", q)
    for _ in range(samples):
        x = tower.random_element(Level.QUARTIC, rng)
        y = tower.random_element(Level.QUARTIC, rng)
        if frobenius_q(x + y) != frobenius_q(x) + frobenius_q(y):
            return False, f"(x+y)^q != x^q + y^q at {x}, {y}"
        if frobenius_q(x * y) != frobenius_q(x) * frobenius_q(y):
            return False, f"(xy)^q != x^q y^q at {x}, {y}"
        u = tower.random_element(Level.QUADRATIC, rng)
        if frobenius_q(frobenius_q(u)) != u:
            return False, f"conjugation is not an involution on F_q^2 at {u}"
        b = tower.random_element(Level.BASE, rng).embed(Level.QUADRATIC)
        if frobenius_q(b) != b:
            return False, f"F_q is not fixed at {b}"
    return True, f"{samples} random pairs"


def expansion_case(q: int, samples: int, seed: int) -> CaseResult:
    tower = tower_for(q)
    rng = _rng(seed, "expansion", q)
    omega = tower.omega
    for _ in range(samples):
        x = tower.random_element(Level.QUARTIC, rng)
        a, b = expand_over_subfield(x)
        if a + b * omega != x:
            return False, f"{{1, ω}} recomposition fails at {x}"
        e0 = tower.random_element(Level.QUARTIC, rng, nonzero=True)
        e1 = e0 * omega
        a, b = expand_over_subfield(x, (e0, e1))
        if a * e0 + b * e1 != x:
            return False, f"recomposition over a random basis fails at {x}"
    return True, f"{samples} random quartic elements"


def coset_partition_case(family: str, q: int) -> CaseResult:
    ctx = context(family, q)
    decomposition = theta_decomposition(ctx)
    singles, pairs = len(decomposition.singletons), len(decomposition.pairs)
    expected_singles = 2 if ctx.family is Family.I else 1
    if singles != expected_singles or singles + 2 * pairs != ctx.n:
        return False, f"{singles} singletons and {pairs} pairs for n={ctx.n}"
    top = (q - 1) // 2 if ctx.family is Family.I else ctx.half - 1
    for count in range(top + 1):
        Z = defining_set(ctx, count)
        size = 2 * count + 1 if ctx.family is Family.I else 2 * (count + 1)
        if len(Z) != size:
            return False, f"defining set {count} has {len(Z)} exponents, expected {size}"
    return True, f"{singles} singletons, {pairs} pairs, n={ctx.n}"


def dual_containment_case(family: str, q: int) -> CaseResult:
    ctx = context(family, q)
    lo, hi = family_bounds(family, q)
    failing = [i for i in range(lo, hi + 1) if not is_dual_containing(defining_set(ctx, i))]
    if failing:
        return False, f"Z meets Z^-q for i in {failing}"
    return True, f"i = {lo}..{hi}"


def oracle_agreement_case(family: str, q: int) -> CaseResult:
    ctx = context(family, q)
    lo, hi = family_bounds(family, q)
    for i in range(lo, hi + 1):
        code = block.build_code(ctx, defining_set(ctx, i))
        criterion = is_dual_containing(code.Z)
        membership = block.verify_dual_containing_codewords(code)
        if not (criterion and membership):
            return False, f"i={i}: coset criterion {criterion}, codeword membership {membership}"
    return True, f"i = {lo}..{hi}, both oracles true"


def convolutional_case(family: str, q: int) -> CaseResult:
    lo, hi = family_bounds(family, q)
    for i in range(lo, hi + 1):
        cert = construct(family, q, i, VerificationLevel.ALGEBRAIC)
        if not cert.valid:
            failed = [name for name, r in cert.checks.items() if r.status.value == "FAIL"]
            return False, f"i={i}: failed {failed}"
    return True, f"i = {lo}..{hi} basic, reduced, self-orthogonal and pinned"


def singleton_case(family: str, q: int) -> CaseResult:
    lo, hi = family_bounds(family, q)
    previous = None
    for i in range(lo, hi + 1):
        p = formula_params(family, q, i)
        if not is_mds(p):
            return False, f"{p} misses the quantum Singleton bound"
        if previous is not None and (p.d_f - previous.d_f, previous.k - p.k) != (2, 4):
            return False, f"{previous} -> {p} does not step d_f by 2 and k by 4"
        previous = p
    return True, f"i = {lo}..{hi} meet the bound"


def column_oracle_case(family: str, q: int, count: int, w: int, expected: bool, budgets: Budgets) -> CaseResult:
    ctx = context(family, q)
    code = block.build_code(ctx, defining_set(ctx, count))
    ok = block.certify_distance_columns(code, w, budgets)
    verdict = "independent" if ok else "dependent somewhere"
    return ok == expected, f"[{code.n}, {code.k}] code, every {w} columns {verdict}"


def dual_distance_case(family: str, q: int, count: int, expected: int, budgets: Budgets) -> CaseResult:
    ctx = context(family, q)
    code = block.build_code(ctx, defining_set(ctx, count))
    found = block.dual_distance_exhaustive(code, budgets)
    return found == expected, f"[{code.n}, {code.k}] code, dual distance {found} (expected {expected})"


# -- suite expansion -----------------------------------------------------------


def _suite_qs(suite: Suite, settings: VerifySettings, family: Family | None = None) -> list[int]:
    if "q" in suite.spec:
        qs = [int(q) for q in suite.spec["q"]]
    else:
        limit = min(int(suite.spec.get("q_max", settings.max_q)), settings.max_q)
        qs = admissible_qs(family or Family.I, limit)
    qs = [q for q in qs if q <= settings.max_q]
    if settings.q is not None:
        qs = [q for q in qs if q == settings.q]
    return qs


def _families(suite: Suite) -> list[Family]:
    if "family" in suite.spec:
        return [Family(suite.spec["family"])]
    return [Family(f) for f in suite.spec.get("families", ["I", "II"])]


def _per_q(fn: Callable[..., CaseResult], with_samples: bool) -> Callable[[Suite, VerifySettings], list[Job]]:
    def build(suite: Suite, settings: VerifySettings) -> list[Job]:
        args = (settings.samples, settings.seed) if with_samples else ()
        return [Job(f"q={q}", fn, (q, *args), group=suite.name) for q in _suite_qs(suite, settings)]

    return build


def _per_family(fn: Callable[..., CaseResult]) -> Callable[[Suite, VerifySettings], list[Job]]:
    def build(suite: Suite, settings: VerifySettings) -> list[Job]:
        return [
            Job(f"family {f.value}, q={q}", fn, (f.value, q), group=suite.name)
            for f in _families(suite)
            for q in _suite_qs(suite, settings, f)
        ]

    return build


def _explicit(fn: Callable[..., CaseResult]) -> Callable[[Suite, VerifySettings], list[Job]]:
    def build(suite: Suite, settings: VerifySettings) -> list[Job]:
        jobs = []
        for case in suite.spec.get("cases", []):
            q = int(case["q"])
            if q > settings.max_q or (settings.q is not None and q != settings.q):
                continue
            kwargs = {k: v for k, v in case.items() if k not in ("family", "q")}
            label = ", ".join(f"{k}={v}" for k, v in case.items())
            jobs.append(
                Job(label, fn, (case.get("family", "I"), q), {**kwargs, "budgets": settings.budgets}, group=suite.name)
            )
        return jobs

    return build


CASE_BUILDERS: dict[str, Callable[[Suite, VerifySettings], list[Job]]] = {
    "field_axioms": _per_q(field_axioms_case, with_samples=True),
    "frobenius": _per_q(frobenius_case, with_samples=True),
    "expansion": _per_q(expansion_case, with_samples=True),
    "coset_partition": _per_family(coset_partition_case),
    "dual_containment": _per_family(dual_containment_case),
    "oracle_agreement": _per_family(oracle_agreement_case),
    "convolutional": _per_family(convolutional_case),
    "singleton": _per_family(singleton_case),
    "column_oracle": _explicit(column_oracle_case),
    "dual_distance": _explicit(dual_distance_case),
}


def run_suites(
    suites: list[Suite], settings: VerifySettings, pool: PoolConfig | None = None
) -> SuiteReport:
    """Run every suite at or below the requested level."""
    jobs: list[Job] = []
    for suite in suites:
        if suite.level <= settings.level:
            jobs.extend(CASE_BUILDERS[suite.kind](suite, settings))

    report = SuiteReport()
    for job, result in zip(jobs, run_jobs(jobs, pool)):
        suite = job.group or ""
        if result.ok:
            passed, detail = result.value
            report.checks.append(SuiteCheck(suite, job.name, "PASS" if passed else "FAIL", detail))
        elif isinstance(result.error, BudgetExceeded):
            report.checks.append(SuiteCheck(suite, job.name, "SKIP", str(result.error)))
        elif isinstance(result.error, QccError):
            report.checks.append(SuiteCheck(suite, job.name, "FAIL", str(result.error)))
        else:
            raise result.error  # type: ignore[misc]
    return report
