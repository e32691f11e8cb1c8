"""
The ``mdsqcc`` command line.

    mdsqcc construct --family I --q 7 --i 2 --level 1
    mdsqcc table --family I --q-list 7,11,13,19,23
    mdsqcc cosets --family II --q 23
    mdsqcc verify --level 2 --q 5

Exit codes: 0 valid, 1 failed check, 2 violated hypothesis, 3 budget exhausted.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

from invoke import Collection, Program, task
from invoke.exceptions import Exit
from rich.console import Console
from rich.table import Table

from . import __version__
from .config import QccConfig, RunConfig, budgets_from, parse_int_list, parse_range
from .cosets import context, theta_decomposition
from .errors import BudgetExceeded, PreconditionError, QccError
from .quantum import TABLE_COLUMNS, QccCertificate, table_row, table_rows
from .quantum import construct as build_certificate
from .runner import JobFailed, PoolConfig, console
from .verify import VerifySettings, load_suites, run_suites

HELP = {
    "family": "Code family: I (n = q^2+1) or II (n = (q^2+1)/10).",
    "q": "Field size q (odd prime power).",
    "i": "Family index i.",
    "q-list": "Comma-separated field sizes, e.g. 7,11,13.",
    "i-range": "Inclusive range of i, e.g. 2..5.",
    "level": "Verification level: 0 closed form, 1 algebraic, 2 exhaustive.",
    "budget-ranks": "Cap on column-subset rank checks.",
    "budget-words": "Cap on enumerated dual codewords.",
    "out": "Write output to this path instead of stdout.",
    "format": "json, csv or text.",
    "workers": "Parallel workers (default from config).",
    "progress": "Show the live progress tree on stderr.",
    "fail-fast": "Stop at the first failing job instead of reporting it as a row.",
    "timings": "Record per-stage timings in certificates.",
    "matrices": "Embed check and generator matrices in the certificate.",
    "suite": "YAML suite file (default: the bundled suite).",
    "max-q": "Largest q the suites may touch.",
}


def _help(*names: str) -> dict[str, str]:
    return {name: HELP[name] for name in names}


@contextmanager
def exit_codes() -> Iterator[None]:
    """Map library exceptions onto exit codes; a fail-fast job failure exits as its cause would."""
    try:
        yield
    except JobFailed as e:
        cause = e.error
        code = 2 if isinstance(cause, PreconditionError) else 3 if isinstance(cause, BudgetExceeded) else 1
        raise Exit(f"error: {e}", code) from e
    except PreconditionError as e:
        raise Exit(f"error: {e}", 2) from e
    except BudgetExceeded as e:
        raise Exit(f"error: {e}; lower --level or raise the budget", 3) from e
    except QccError as e:
        raise Exit(f"error: {e}", 1) from e


def _run_config(c, command: str, **kwargs) -> RunConfig:
    with exit_codes():
        budgets = budgets_from(c.config, kwargs.pop("budget_ranks") or None, kwargs.pop("budget_words") or None)
        q_list = parse_int_list(kwargs.pop("q_list") or "")
        i_range = kwargs.pop("i_range") or None
        workers = kwargs.pop("workers") or int(c.config.workers)
        out = kwargs.pop("out") or None
        return RunConfig(
            command=command,
            budgets=budgets,
            q_list=q_list,
            i_range=parse_range(i_range) if i_range else None,
            workers=workers,
            out=Path(out) if out else None,
            **kwargs,
        )


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        out.write_text(text)
        console.print(f"[dim]wrote {out}[/dim]")


def _render(table: Table) -> str:
    buffer = io.StringIO()
    Console(file=buffer, width=160, no_color=True).print(table)
    return buffer.getvalue()


def _csv(rows: list[dict], columns: tuple[str, ...]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: str(v).lower() if isinstance(v, bool) else v for k, v in row.items()})
    return buffer.getvalue()


def _certificate_text(cert: QccCertificate) -> str:
    table = Table(title=f"family {cert.family.value}, q={cert.q}, i={cert.i}: {cert.params}")
    table.add_column("check")
    table.add_column("status")
    table.add_column("detail")
    for name, result in cert.checks.items():
        table.add_row(name, result.status.value, result.detail)
    table.caption = f"singleton bound {cert.singleton_bound}, mds={cert.mds}, valid={cert.valid}"
    return _render(table)


@task(
    help=_help(
        "family", "q", "i", "level", "budget-ranks", "budget-words", "out", "format", "workers", "timings", "matrices"
    )
)
def construct(
    c,
    family="I",
    q=0,
    i=0,
    level=1,
    budget_ranks=0,
    budget_words=0,
    out="",
    format="json",
    workers=0,
    timings=False,
    matrices=False,
):
    """Construct one code and write its certificate."""
    run = _run_config(
        c, "construct", family=family, q=q or None, i=i or None, level=level,
        budget_ranks=budget_ranks, budget_words=budget_words, q_list="", i_range="",
        out=out, format=format, workers=workers, timings=timings,
    )
    if run.q is None or run.i is None:
        raise Exit("error: construct needs both --q and --i", 2)
    with exit_codes():
        cert = build_certificate(
            run.family, run.q, run.i, run.level, run.budgets, run.workers, run.timings, matrices
        )
    if run.format == "json":
        text = cert.to_json()
    elif run.format == "csv":
        text = _csv([table_row(cert)], TABLE_COLUMNS)
    else:
        text = _certificate_text(cert)
    _emit(text, run.out)
    if not cert.valid:
        raise Exit(f"error: certificate for {cert.params} is not valid", 1)


@task(
    help=_help(
        "family", "q-list", "i-range", "level", "budget-ranks", "budget-words", "out", "format", "workers", "progress",
        "fail-fast",
    )
)
def table(
    c,
    family="I",
    q_list="",
    i_range="",
    level=1,
    budget_ranks=0,
    budget_words=0,
    out="",
    format="csv",
    workers=0,
    progress=True,
    fail_fast=False,
):
    """Regenerate a parameter table with live verification."""
    run = _run_config(
        c, "table", family=family, q_list=q_list, i_range=i_range, level=level,
        budget_ranks=budget_ranks, budget_words=budget_words, out=out, format=format,
        workers=workers, progress=progress,
    )
    pool = PoolConfig(
        max_workers=run.workers, processes=run.workers > 1, progress=run.progress, fail_fast=fail_fast
    )
    with exit_codes():
        rows = table_rows(run.family, run.q_list, run.level, run.budgets, pool, run.i_range)

    if run.format == "csv":
        text = _csv(rows, TABLE_COLUMNS)
    elif run.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        grid = Table(title=f"family {run.family}")
        for column in TABLE_COLUMNS:
            grid.add_column(column)
        for row in rows:
            grid.add_row(*(str(row[column]) for column in TABLE_COLUMNS))
        text = _render(grid)
    _emit(text, run.out)
    if any(row["valid"] is False and row["i"] != "" for row in rows):
        raise Exit("error: some rows failed verification", 1)


@task(help=_help("family", "q", "out", "format"))
def cosets(c, family="I", q=0, out="", format="json"):
    """Print the coset decomposition of theta."""
    if not q:
        raise Exit("error: cosets needs --q", 2)
    with exit_codes():
        decomposition = theta_decomposition(context(family, q)).as_dict()
    if format == "text":
        grid = Table(title=f"family {family}, q={q}, n={decomposition['n']}, rn={decomposition['modulus']}")
        grid.add_column("kind")
        grid.add_column("coset")
        for single in decomposition["singletons"]:
            grid.add_row("singleton", str(single))
        for pair in decomposition["pairs"]:
            grid.add_row("pair", str(pair))
        text = _render(grid)
    else:
        text = json.dumps(decomposition, indent=2) + "\n"
    _emit(text, Path(out) if out else None)


@task(
    help=_help(
        "level", "q", "suite", "max-q", "budget-ranks", "budget-words", "out", "format", "workers", "progress"
    )
)
def verify(
    c,
    level=1,
    q=0,
    suite="",
    max_q=0,
    budget_ranks=0,
    budget_words=0,
    out="",
    format="json",
    workers=0,
    progress=True,
):
    """Run the invariant suites and report PASS/FAIL/SKIP per check."""
    run = _run_config(
        c, "verify", q=q or None, level=level, budget_ranks=budget_ranks,
        budget_words=budget_words, q_list="", i_range="", out=out, format=format,
        workers=workers, progress=progress,
    )
    with exit_codes():
        suites, samples = load_suites(Path(suite) if suite else None)
        settings = VerifySettings(
            level=run.level,
            budgets=run.budgets,
            q=run.q,
            max_q=max_q or int(c.config.verify.max_q),
            seed=int(c.config.verify.seed),
            samples=samples,
        )
        pool = PoolConfig(max_workers=run.workers, processes=run.workers > 1, progress=run.progress)
        report = run_suites(suites, settings, pool)

    if run.format == "text":
        grid = Table(title="verification")
        for column in ("suite", "name", "status", "detail"):
            grid.add_column(column)
        for check in report.checks:
            grid.add_row(check.suite, check.name, check.status, check.detail)
        counts = report.counts()
        grid.caption = f"{counts['PASS']} passed, {counts['FAIL']} failed, {counts['SKIP']} skipped"
        text = _render(grid)
    elif run.format == "csv":
        text = _csv([ch.as_dict() for ch in report.checks], ("suite", "name", "status", "detail"))
    else:
        text = json.dumps(report.as_dict(), indent=2) + "\n"
    _emit(text, run.out)
    if not report.ok:
        raise Exit("error: verification failed", 1)


class QccProgram(Program):
    """``Program`` that also spells the one-letter options ``--q`` and ``--i``.

    invoke gives single-character parameters only a single-dash flag.
    """

    LONG_SPELLINGS = {"--q": "-q", "--i": "-i"}

    def normalize_argv(self, argv: list[str] | str | None) -> None:
        super().normalize_argv(argv)
        out: list[str] = []
        for position, token in enumerate(self.argv):
            if token == "--":
                out.extend(self.argv[position:])
                break
            name, eq, value = token.partition("=")
            if name in self.LONG_SPELLINGS:
                out.append(self.LONG_SPELLINGS[name])
                if eq:
                    out.append(value)
            else:
                out.append(token)
        self.argv = out


namespace = Collection(construct, table, cosets, verify)

program = QccProgram(
    name="mdsqcc",
    binary="mdsqcc",
    version=__version__,
    namespace=namespace,
    config_class=QccConfig,
)


def main() -> None:
    program.run()
