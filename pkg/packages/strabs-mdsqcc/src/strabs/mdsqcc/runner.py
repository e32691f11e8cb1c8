"""
Run independent jobs on a pool with a live progress tree.

Jobs are plain callables with arguments, grouped under a heading in the
display (for example one group per q of a table). Results come back in
submission order whatever order the pool finishes them in.

Example:
    from strabs.mdsqcc.runner import Job, PoolConfig, run_jobs

    results = run_jobs(
        [Job("i=2", construct, ("I", 7, 2), group="q=7"), Job("i=3", construct, ("I", 7, 3), group="q=7")],
        PoolConfig(max_workers=2),
    )
"""

from __future__ import annotations

import concurrent.futures
import time
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Any, Callable, Sequence

from rich.console import Console, Group
from rich.live import Live
from rich.text import Text

from .errors import QccError

console = Console(stderr=True)


class JobStatus(Enum):
    PENDING = auto()
    RUNNING = auto()
    SUCCESS = auto()
    FAILED = auto()


@dataclass
class Job:
    """A callable to run on the pool."""

    name: str
    fn: Callable[..., Any]
    args: tuple = ()
    kwargs: dict[str, Any] = field(default_factory=dict)
    group: str | None = None


@dataclass
class JobResult:
    """Result of a completed job."""

    name: str
    status: JobStatus
    value: Any = None
    error: BaseException | None = None
    duration_seconds: float = 0.0
    group: str | None = None

    @property
    def ok(self) -> bool:
        return self.status == JobStatus.SUCCESS


@dataclass
class PoolConfig:
    """Configuration for the job runner."""

    max_workers: int = 4
    processes: bool = False
    progress: bool = True
    fail_fast: bool = False


class JobFailed(QccError):
    """Raised when a job fails under fail_fast."""

    def __init__(self, job_name: str, error: BaseException | None):
        self.job_name = job_name
        self.error = error
        super().__init__(f"Job '{job_name}' failed: {error}")


def _timed(fn: Callable[..., Any], args: tuple, kwargs: dict[str, Any]) -> tuple[Any, float]:
    start = time.perf_counter()
    value = fn(*args, **kwargs)
    return value, time.perf_counter() - start


@dataclass
class _JobState:
    job: Job
    status: JobStatus = JobStatus.PENDING
    duration: float = 0.0
    error: str = ""


class _DisplayRenderer:
    """Renders job groups as a tree with spinners and durations."""

    SPINNER_FRAMES = ["⠋", "⠙", "⠹", "⠸", "⠼", "⠴", "⠦", "⠧", "⠇", "⠏"]
    TREE_BRANCH = "├── "
    TREE_LAST = "└── "

    def __init__(self, states: list[_JobState]):
        self.states = states
        self._frame = 0

    def _groups(self) -> dict[str | None, list[_JobState]]:
        groups: dict[str | None, list[_JobState]] = {}
        for state in self.states:
            groups.setdefault(state.job.group, []).append(state)
        return groups

    def render(self) -> Group:
        self._frame = (self._frame + 1) % len(self.SPINNER_FRAMES)
        lines: list[Text] = []
        for group, states in self._groups().items():
            if group is None:
                lines.extend(self._render_job(s, prefix="") for s in states)
                continue
            lines.append(self._render_heading(group, states))
            for k, state in enumerate(states):
                branch = self.TREE_LAST if k == len(states) - 1 else self.TREE_BRANCH
                lines.append(self._render_job(state, prefix=branch))
        return Group(*lines)

    def _render_heading(self, group: str, states: list[_JobState]) -> Text:
        done = sum(s.status in (JobStatus.SUCCESS, JobStatus.FAILED) for s in states)
        failed = any(s.status == JobStatus.FAILED for s in states)
        line = Text()
        style = "red" if failed else ("green" if done == len(states) else "blue")
        line.append(group, style=f"{style} bold")
        line.append(f" ({done}/{len(states)})", style="dim")
        return line

    def _render_job(self, state: _JobState, prefix: str) -> Text:
        line = Text()
        line.append(prefix, style="dim")
        if state.status == JobStatus.RUNNING:
            line.append(f"{self.SPINNER_FRAMES[self._frame]} ", style="blue bold")
            line.append(state.job.name, style="blue")
        elif state.status == JobStatus.SUCCESS:
            line.append("✓ ", style="green bold")
            line.append(state.job.name, style="green")
            line.append(f" ({state.duration:.1f}s)", style="dim")
        elif state.status == JobStatus.FAILED:
            line.append("✗ ", style="red bold")
            line.append(state.job.name, style="red")
            if state.error:
                line.append(f"  {state.error}", style="red dim")
        else:
            line.append("○ ", style="dim")
            line.append(state.job.name, style="dim")
        return line


def run_jobs(jobs: Sequence[Job], config: PoolConfig | None = None) -> list[JobResult]:
    """Execute jobs in parallel and return their results in submission order.

    Raises:
        JobFailed: a job failed and ``config.fail_fast`` is set.
    """
    config = config or PoolConfig()
    if not jobs:
        return []

    states = [_JobState(job) for job in jobs]
    results: dict[int, JobResult] = {}
    renderer = _DisplayRenderer(states)
    show = config.progress and console.is_terminal
    pool_cls = (
        concurrent.futures.ProcessPoolExecutor
        if config.processes
        else concurrent.futures.ThreadPoolExecutor
    )

    live = Live(renderer.render(), refresh_per_second=10, console=console) if show else None
    if live:
        live.start()
    try:
        with pool_cls(max_workers=config.max_workers) as executor:
            futures = {
                executor.submit(_timed, s.job.fn, s.job.args, s.job.kwargs): k
                for k, s in enumerate(states)
            }
            while futures:
                for future, k in futures.items():
                    if future.running():
                        states[k].status = JobStatus.RUNNING
                if live:
                    live.update(renderer.render())

                done, _ = concurrent.futures.wait(
                    futures.keys(),
                    timeout=0.1,
                    return_when=concurrent.futures.FIRST_COMPLETED,
                )
                for future in done:
                    k = futures.pop(future)
                    state = states[k]
                    try:
                        value, seconds = future.result()
                        state.status = JobStatus.SUCCESS
                        state.duration = seconds
                        results[k] = JobResult(
                            state.job.name, JobStatus.SUCCESS, value, None, seconds, state.job.group
                        )
                    except Exception as e:
                        state.status = JobStatus.FAILED
                        state.error = str(e)
                        results[k] = JobResult(
                            state.job.name, JobStatus.FAILED, None, e, 0.0, state.job.group
                        )
                        if config.fail_fast:
                            for f in futures:
                                f.cancel()
                            raise JobFailed(state.job.name, e) from e
        if live:
            live.update(renderer.render())
    finally:
        if live:
            live.stop()

    return [results[k] for k in range(len(states))]
