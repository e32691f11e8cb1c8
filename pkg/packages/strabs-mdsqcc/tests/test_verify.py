import pytest

from strabs.mdsqcc.config import Budgets, VerificationLevel
from strabs.mdsqcc.cosets import Family
from strabs.mdsqcc.errors import PreconditionError
from strabs.mdsqcc.runner import PoolConfig
from strabs.mdsqcc.verify import (
    CASE_BUILDERS,
    VerifySettings,
    admissible_qs,
    column_oracle_case,
    coset_partition_case,
    expansion_case,
    field_axioms_case,
    frobenius_case,
    load_suites,
    oracle_agreement_case,
    run_suites,
    singleton_case,
)

QUIET = PoolConfig(max_workers=2, progress=False)


def test_default_suite_loads():
    suites, samples = load_suites()
    assert samples == 1000
    assert {s.kind for s in suites} == set(CASE_BUILDERS)
    levels = {s.name: s.level for s in suites}
    assert levels["singleton"] is VerificationLevel.CLOSED_FORM
    assert levels["dual-distance"] is VerificationLevel.EXHAUSTIVE


def test_unknown_suite_kind_is_rejected(tmp_path):
    path = tmp_path / "suite.yaml"
    path.write_text("suites:\n  - name: odd\n    kind: nonsense\n")
    with pytest.raises(PreconditionError, match="unknown suite kind"):
        load_suites(path)
    path.write_text("samples: 3\n")
    with pytest.raises(PreconditionError, match="no 'suites'"):
        load_suites(path)


def test_admissible_qs():
    assert admissible_qs(Family.I, 13) == [5, 7, 9, 11, 13]
    assert admissible_qs(Family.II, 47) == [23, 27, 37, 43, 47]


@pytest.mark.parametrize("case", [field_axioms_case, frobenius_case, expansion_case])
def test_field_cases(case):
    passed, detail = case(9, 50, 7)
    assert passed, detail


def test_coset_and_oracle_cases():
    assert coset_partition_case("II", 23)[0]
    assert oracle_agreement_case("I", 7)[0]
    assert singleton_case("II", 47)[0]


def test_column_oracle_case():
    passed, detail = column_oracle_case("I", 5, 2, 6, False, Budgets())
    assert passed and "dependent somewhere" in detail


def test_run_suites_filters_by_level_and_q():
    suites, _ = load_suites()
    settings = VerifySettings(level=VerificationLevel.ALGEBRAIC, q=5, samples=20)
    report = run_suites(suites, settings, QUIET)
    assert report.ok
    names = {(c.suite, c.name) for c in report.checks}
    assert ("convolutional", "family I, q=5") in names
    assert not any(c.suite in ("column-oracle", "dual-distance") for c in report.checks)
    assert report.counts()["FAIL"] == 0


def test_exhaustive_suites_skip_over_budget():
    suites, _ = load_suites()
    exhaustive = [s for s in suites if s.kind == "column_oracle"]
    settings = VerifySettings(
        level=VerificationLevel.EXHAUSTIVE, budgets=Budgets(ranks=10), q=5, samples=1
    )
    report = run_suites(exhaustive, settings, QUIET)
    assert [c.status for c in report.checks] == ["SKIP", "PASS"]
    assert report.ok
