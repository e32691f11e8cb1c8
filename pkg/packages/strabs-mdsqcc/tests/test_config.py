import pytest

from strabs.mdsqcc.config import (
    Budgets,
    QccConfig,
    RunConfig,
    VerificationLevel,
    budgets_from,
    parse_int_list,
    parse_range,
)
from strabs.mdsqcc.errors import PreconditionError


@pytest.mark.parametrize("text", ["2..5", "2-5", "2:5"])
def test_parse_range(text):
    assert parse_range(text) == (2, 5)


def test_parse_single_value_range():
    assert parse_range("3") == (3, 3)
    with pytest.raises(PreconditionError):
        parse_range("a..b")


def test_parse_int_list():
    assert parse_int_list("7, 11,13") == [7, 11, 13]
    assert parse_int_list("") == []
    with pytest.raises(PreconditionError):
        parse_int_list("7,x")


def test_budgets_must_be_positive():
    with pytest.raises(PreconditionError, match="ranks"):
        Budgets(ranks=0)


def test_budgets_from_config_with_overrides():
    config = QccConfig()
    budgets = budgets_from(config)
    assert budgets == Budgets()
    assert budgets_from(config, ranks=50).ranks == 50
    assert config.verify.max_q == 47
    assert config.workers == 4


def test_run_config_validation():
    run = RunConfig(command="construct", level=2)
    assert run.level is VerificationLevel.EXHAUSTIVE
    with pytest.raises(PreconditionError, match="family"):
        RunConfig(command="construct", family="III")
    with pytest.raises(PreconditionError, match="level"):
        RunConfig(command="construct", level=5)
    with pytest.raises(PreconditionError, match="format"):
        RunConfig(command="construct", format="xml")
    with pytest.raises(PreconditionError, match="empty i-range"):
        RunConfig(command="table", i_range=(4, 2))
