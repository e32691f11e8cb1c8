"""
Verification levels, work budgets and run configuration.

Settings are layered the invoke way: built-in defaults, then ``mdsqcc.yaml``
files (system, user, project), then ``MDSQCC_*`` environment variables, then
command-line flags.
"""

from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Any

from invoke import Config
from invoke.config import merge_dicts

from .errors import PreconditionError


class VerificationLevel(IntEnum):
    CLOSED_FORM = 0
    ALGEBRAIC = 1
    EXHAUSTIVE = 2


@dataclass(frozen=True)
class Budgets:
    """Work caps for the exhaustive oracles."""

    ranks: int = 10**8
    words: int = 10**8
    minors: int = 10**5

    def __post_init__(self):
        for name in ("ranks", "words", "minors"):
            if getattr(self, name) < 1:
                raise PreconditionError(f"budget '{name}' must be positive")


DEFAULTS: dict[str, Any] = {
    "budgets": {"ranks": Budgets.ranks, "words": Budgets.words, "minors": Budgets.minors},
    "workers": 4,
    "verify": {"max_q": 47, "seed": 20150617},
}

FORMATS = ("json", "csv", "text")


class QccConfig(Config):
    """Invoke config that reads ``mdsqcc.yaml`` files and ``MDSQCC_*`` env vars."""

    prefix = "mdsqcc"

    @staticmethod
    def global_defaults() -> dict[str, Any]:
        defaults = Config.global_defaults()
        merge_dicts(defaults, DEFAULTS)
        return defaults


def budgets_from(config: Config, ranks: int | None = None, words: int | None = None) -> Budgets:
    """Budgets from an invoke config, with flag overrides."""
    budgets = config.get("budgets", DEFAULTS["budgets"])
    return Budgets(
        ranks=int(ranks if ranks is not None else budgets["ranks"]),
        words=int(words if words is not None else budgets["words"]),
        minors=int(budgets["minors"]),
    )


@dataclass
class RunConfig:
    """One CLI invocation."""

    command: str
    family: str = "I"
    q: int | None = None
    q_list: list[int] = field(default_factory=list)
    i: int | None = None
    i_range: tuple[int, int] | None = None
    level: VerificationLevel = VerificationLevel.ALGEBRAIC
    budgets: Budgets = field(default_factory=Budgets)
    out: Path | None = None
    format: str = "json"
    workers: int = 4
    progress: bool = True
    timings: bool = False

    def __post_init__(self):
        if self.family not in ("I", "II"):
            raise PreconditionError(f"family must be I or II, got {self.family!r}")
        try:
            self.level = VerificationLevel(int(self.level))
        except ValueError:
            raise PreconditionError(f"level must be 0, 1 or 2, got {self.level}") from None
        if self.format not in FORMATS:
            raise PreconditionError(
                f"format must be one of {', '.join(FORMATS)}, got {self.format!r}"
            )
        if self.workers < 1:
            raise PreconditionError("workers must be positive")
        if self.i_range is not None and self.i_range[0] > self.i_range[1]:
            raise PreconditionError(f"empty i-range {self.i_range[0]}..{self.i_range[1]}")


def parse_int_list(text: str) -> list[int]:
    """Parse ``"7,11,13"`` into ``[7, 11, 13]``."""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise PreconditionError(f"expected a comma-separated list of integers, got {text!r}") from None


def parse_range(text: str) -> tuple[int, int]:
    """Parse ``"2..5"`` (or ``"2-5"``, or a single ``"3"``) into an inclusive pair."""
    for sep in ("..", "-", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            break
    else:
        lo = hi = text
    try:
        return int(lo), int(hi)
    except ValueError:
        raise PreconditionError(f"expected a range like 2..5, got {text!r}") from None
