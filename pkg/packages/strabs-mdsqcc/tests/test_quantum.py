import json

import pytest

from strabs.mdsqcc import conv
from strabs.mdsqcc.config import Budgets, VerificationLevel
from strabs.mdsqcc.errors import BudgetExceeded, PreconditionError
from strabs.mdsqcc.quantum import (
    ALGEBRAIC_CHECKS,
    ERRATUM_FREE_DISTANCE,
    ERRATUM_TABLE_Q13,
    EXHAUSTIVE_CHECKS,
    CheckStatus,
    QccParams,
    construct,
    construct_family_I,
    construct_family_II,
    family_bounds,
    formula_params,
    is_mds,
    quantum_singleton_bound,
    stabilizer_params,
    table_row,
    table_rows,
    weight_separation,
)
from strabs.mdsqcc.runner import JobFailed, PoolConfig


@pytest.mark.parametrize(
    ("n", "k", "gamma", "bound"),
    [(50, 44, 2, 6), (53, 45, 2, 7), (26, 20, 2, 6), (10, 8, 0, 2), (5, 1, 10, 19)],
)
def test_quantum_singleton_bound(n, k, gamma, bound):
    assert quantum_singleton_bound(n, k, gamma) == bound


def test_singleton_bound_needs_positive_redundancy():
    with pytest.raises(PreconditionError):
        quantum_singleton_bound(10, 10, 2)


@pytest.mark.parametrize(
    ("family", "q", "i", "text"),
    [
        ("I", 5, 2, "[(26, 20, 1; 2, 6)]_5"),
        ("I", 7, 2, "[(50, 44, 1; 2, 6)]_7"),
        ("I", 7, 3, "[(50, 40, 1; 2, 8)]_7"),
        ("I", 9, 2, "[(82, 76, 1; 2, 6)]_9"),
        ("I", 13, 6, "[(170, 148, 1; 2, 14)]_13"),
        ("II", 23, 2, "[(53, 45, 1; 2, 7)]_23"),
        ("II", 23, 3, "[(53, 41, 1; 2, 9)]_23"),
        ("II", 27, 3, "[(73, 61, 1; 2, 9)]_27"),
    ],
)
def test_formula_params(family, q, i, text):
    params = formula_params(family, q, i)
    assert str(params) == text
    assert is_mds(params)


def test_family_bounds():
    assert family_bounds("I", 11) == (2, 5)
    assert family_bounds("II", 37) == (2, 5)
    with pytest.raises(PreconditionError, match="q >= 5"):
        family_bounds("I", 3)
    with pytest.raises(PreconditionError, match="m >= 2"):
        family_bounds("II", 13)


def test_range_violations_name_the_bound():
    with pytest.raises(PreconditionError, match=r"i <= \(q-1\)/2 = 2"):
        formula_params("I", 5, 3)
    with pytest.raises(PreconditionError, match="i <= 2m-1 = 3"):
        formula_params("II", 23, 4)
    with pytest.raises(PreconditionError, match="i >= 2"):
        formula_params("I", 7, 1)


def test_weight_separation():
    assert weight_separation("I", 7, 3) == (44, 8)
    assert weight_separation("II", 23, 2) == (48, 7)


def test_stabilizer_params_requires_weight_separation(code5):
    G = conv.split_and_build(code5.tower, code5.check_expanded[:3], code5.check_expanded[3:])
    with pytest.raises(PreconditionError, match="weight separation"):
        stabilizer_params(conv.ConvCode(G, free_distance_lower=6), 6, 5)
    params = stabilizer_params(conv.ConvCode(G, free_distance_lower=22), 6, 5)
    assert params == QccParams(n=26, k=20, mu=1, gamma=2, d_f=6, q=5)


def test_construct_small_family_i():
    cert = construct("I", 5, 2)
    assert cert.valid
    assert str(cert.params) == "[(26, 20, 1; 2, 6)]_5"
    assert cert.mds and cert.singleton_bound == 6
    for name in ("weight_separation", *ALGEBRAIC_CHECKS, "formula_agreement", "singleton_equality"):
        assert cert.checks[name].status is CheckStatus.PASS, (name, cert.checks[name].detail)
    for name in EXHAUSTIVE_CHECKS:
        assert cert.checks[name].status is CheckStatus.SKIPPED
    assert cert.erratum_notes == []


def test_construct_family_ii_notes_the_free_distance_erratum():
    cert = construct("II", 23, 2)
    assert cert.valid
    assert str(cert.params) == "[(53, 45, 1; 2, 7)]_23"
    assert cert.erratum_notes == [ERRATUM_FREE_DISTANCE]
    assert cert.defining_sets["C"]["size"] == 6
    assert cert.defining_sets["C1"]["size"] == 2


def test_closed_form_level_skips_algebraic_checks():
    cert = construct("I", 7, 3, level=VerificationLevel.CLOSED_FORM)
    assert cert.valid
    assert cert.checks["basic"].status is CheckStatus.SKIPPED
    assert cert.checks["weight_separation"].status is CheckStatus.PASS


def test_construct_rejects_out_of_range_i():
    with pytest.raises(PreconditionError):
        construct("I", 5, 3)


def test_exhaustive_level_respects_budgets():
    with pytest.raises(BudgetExceeded):
        construct("I", 5, 2, level=VerificationLevel.EXHAUSTIVE, budgets=Budgets(ranks=10))


@pytest.mark.slow
def test_exhaustive_level_confirms_small_code():
    cert = construct("I", 5, 2, level=VerificationLevel.EXHAUSTIVE)
    assert cert.valid
    assert cert.checks["column_oracle"].status is CheckStatus.PASS
    assert cert.checks["dual_distance_exhaustive"].status is CheckStatus.PASS


def test_certificate_serialisation():
    cert = construct("I", 5, 2, timings=True, matrices=True)
    data = json.loads(cert.to_json())
    assert data["params"] == {"n": 26, "k": 20, "mu": 1, "gamma": 2, "d_f": 6}
    assert data["valid"] is True
    assert data["tower"]["p"] == 5
    assert {"cosets", "block", "conv"} <= data["timings_ms"].keys()
    assert data["checks"]["basic"]["status"] == "PASS"
    assert len(data["matrices"]["G"]) == 3


def test_timings_are_off_by_default():
    assert construct("I", 5, 2).timings_ms == {}


def test_failed_check_invalidates_certificate():
    cert = construct("I", 5, 2)
    cert.record("basic", False, "forced", VerificationLevel.ALGEBRAIC)
    assert not cert.valid


def test_table_row_for_q37_carries_the_erratum_note():
    cert = construct("II", 37, 2, level=VerificationLevel.CLOSED_FORM)
    assert ERRATUM_TABLE_Q13 in cert.erratum_notes
    row = table_row(cert)
    assert row["n"] == 137 and row["k"] == 129
    assert "q=13" in row["note"]


def test_table_rows_per_q():
    rows = table_rows(
        "I", [23, 7, 11, 19, 13], VerificationLevel.CLOSED_FORM, pool=PoolConfig(progress=False)
    )
    counts: dict[int, int] = {}
    for row in rows:
        counts[row["q"]] = counts.get(row["q"], 0) + 1
    assert counts == {7: 2, 11: 4, 13: 5, 19: 8, 23: 10}
    assert [row["q"] for row in rows] == sorted(row["q"] for row in rows)
    assert all(row["valid"] and row["mds"] for row in rows)


def test_table_rows_warn_on_inadmissible_q_and_filter_i():
    rows = table_rows(
        "I", [3, 11], VerificationLevel.CLOSED_FORM, pool=PoolConfig(progress=False), i_range=(3, 4)
    )
    assert rows[0]["q"] == 3 and rows[0]["i"] == "" and rows[0]["valid"] is False
    assert "q >= 5" in rows[0]["note"]
    assert [row["i"] for row in rows[1:]] == [3, 4]


def test_per_family_entry_points():
    assert str(construct_family_I(7, 2, level=VerificationLevel.CLOSED_FORM).params) == "[(50, 44, 1; 2, 6)]_7"
    cert = construct_family_II(23, 3, level=VerificationLevel.CLOSED_FORM)
    assert str(cert.params) == "[(53, 41, 1; 2, 9)]_23"


def _params(row: dict) -> tuple[int, ...]:
    return row["q"], row["i"], row["n"], row["k"], row["mu"], row["gamma"], row["d_f"]


@pytest.mark.slow
def test_family_i_table_at_the_algebraic_level():
    rows = table_rows("I", [7, 11, 13, 19, 23], VerificationLevel.ALGEBRAIC, pool=PoolConfig(progress=False))
    assert len(rows) == 29
    assert [_params(row) for row in rows[:6]] == [
        (7, 2, 50, 44, 1, 2, 6),
        (7, 3, 50, 40, 1, 2, 8),
        (11, 2, 122, 116, 1, 2, 6),
        (11, 3, 122, 112, 1, 2, 8),
        (11, 4, 122, 108, 1, 2, 10),
        (11, 5, 122, 104, 1, 2, 12),
    ]
    assert _params(rows[-1]) == (23, 11, 530, 488, 1, 2, 24)
    for row in rows:
        q, i = row["q"], row["i"]
        assert _params(row) == (q, i, q * q + 1, q * q + 3 - 4 * i, 1, 2, 2 * i + 2)
        assert row["valid"] is True and row["mds"] is True and row["singleton"] == row["d_f"]
        assert row["note"] == ""


@pytest.mark.slow
def test_family_ii_table_at_the_algebraic_level():
    rows = table_rows("II", [23, 27, 37], VerificationLevel.ALGEBRAIC, pool=PoolConfig(progress=False))
    assert [_params(row) for row in rows] == [
        (23, 2, 53, 45, 1, 2, 7),
        (23, 3, 53, 41, 1, 2, 9),
        (27, 2, 73, 65, 1, 2, 7),
        (27, 3, 73, 61, 1, 2, 9),
        (37, 2, 137, 129, 1, 2, 7),
        (37, 3, 137, 125, 1, 2, 9),
        (37, 4, 137, 121, 1, 2, 11),
        (37, 5, 137, 117, 1, 2, 13),
    ]
    assert all(row["valid"] is True and row["mds"] is True for row in rows)
    assert [row["q"] for row in rows if "q=13" in row["note"]] == [37, 37, 37, 37]


def test_table_rows_fail_fast_raises_the_first_failure():
    pool = PoolConfig(max_workers=1, progress=False, fail_fast=True)
    with pytest.raises(JobFailed) as excinfo:
        table_rows("I", [5], VerificationLevel.EXHAUSTIVE, Budgets(ranks=10), pool)
    assert isinstance(excinfo.value.error, BudgetExceeded)
    assert excinfo.value.job_name == "i=2"
