"""Command line interface: `logan-lab bessel-zeros | verify | eval`.

Exit codes: 0 success, 1 a verification check failed, 2 usage error.
"""
from __future__ import annotations

import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import click
import numpy as np

from . import __version__
from .bessel import Order, zeros
from .eigenpoly import build_p, thm_hn_function
from .extremal import ExtremalFunction, Variant
from .suites import PROFILES, SUITES, Check, ToleranceProfile, build_tasks, run_task

__all__ = ["Report", "ToleranceProfile", "Check", "main"]

SCHEMA = 1
DEFAULT_ALPHAS = (-0.5, 0.0, 0.7, 1.0, 2.5)
DEFAULT_MS = (0, 1, 2, 3)
DEFAULT_SS = (0, 1, 2)
DEFAULT_SEED = 42


@dataclass
class Report:
    command: str
    parameters: dict
    results: list = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def to_json(self) -> str:
        doc = {
            "schema": SCHEMA,
            "command": self.command,
            "parameters": self.parameters,
            "results": self.results,
            "checks": [asdict(c) for c in self.checks],
            "passed": self.passed,
            "timestamp": self.timestamp,
        }
        return json.dumps(_jsonable(doc), indent=2, sort_keys=True)

    def write(self, path: str | None):
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(self.to_json() + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _order(ctx, param, value):
    try:
        Order(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    return value


def _number_list(kind):
    def parse(ctx, param, value):
        if value is None:
            return None
        try:
            items = [kind(v) for v in str(value).split(",") if v.strip()]
        except ValueError:
            raise click.BadParameter(f"expected a comma-separated list, got {value!r}") from None
        if not items:
            raise click.BadParameter("list must be nonempty")
        return items

    return parse


def _grid(ctx, param, value):
    try:
        start, stop, step = (float(v) for v in value.split(":"))
    except ValueError:
        raise click.BadParameter(f"grid must be start:stop:step, got {value!r}") from None
    if not (step > 0 and stop >= start):
        raise click.BadParameter("grid needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def _workers() -> int:
    env = os.environ.get("LOGAN_LAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise click.UsageError(f"LOGAN_LAB_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise click.UsageError("LOGAN_LAB_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


@click.group()
@click.version_option(__version__)
def main():
    """Extremal bandlimited functions for the Hankel transform."""


@main.command("bessel-zeros")
@click.option("--alpha", type=float, required=True, callback=_order, help="Hankel order, alpha >= -1/2.")
@click.option("--count", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), help="Also write a JSON report here.")
def bessel_zeros(alpha, count, fmt, out):
    """Positive zeros q_{alpha,k} of the Bessel function J_alpha."""
    q = zeros(alpha, count).zeros
    rows = [{"k": k, "q": float(v)} for k, v in enumerate(q, start=1)]
    if fmt == "csv":
        click.echo("k,q")
        for r in rows:
            click.echo(f"{r['k']},{r['q']!r}")
    else:
        click.echo(json.dumps(rows))
    Report("bessel-zeros", {"alpha": alpha, "count": count}, rows).write(out)


@main.command()
@click.argument("suite", type=click.Choice([*SUITES, "all"]))
@click.option("--alpha", "alphas", callback=_number_list(float), help="Comma-separated orders.")
@click.option("--m", "ms", callback=_number_list(int), help="Comma-separated m values.")
@click.option("--s", "ss", callback=_number_list(int), help="Comma-separated s values (uncertainty).")
@click.option("--points", type=click.IntRange(min=1), default=8, show_default=True, help="Gram matrix size.")
@click.option("--sets", type=click.IntRange(min=1), default=20, show_default=True, help="Random point sets.")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--profile", type=click.Choice(sorted(PROFILES)), default="default", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), help="Write the JSON report here.")
def verify(suite, alphas, ms, ss, points, sets, seed, profile, out):
    """Run verification suites; exit 1 if any check fails."""
    alphas = alphas or list(DEFAULT_ALPHAS)
    ms = ms or list(DEFAULT_MS)
    ss = ss or list(DEFAULT_SS)
    for a in alphas:
        _order(None, None, a)
    if min(ms) < 0 or min(ss) < 0:
        raise click.BadParameter("m and s must be nonnegative")
    prof = PROFILES[profile]
    tasks = build_tasks(suite, alphas, ms)
    args = [(t, seed, i, ss, prof, points, sets) for i, t in enumerate(tasks)]
    workers = min(_workers(), len(tasks))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_task, *zip(*args)))
    else:
        outcomes = [run_task(*a) for a in args]
    report = Report("verify", {"suite": suite, "alpha": alphas, "m": ms, "s": ss, "points": points,
                               "sets": sets, "seed": seed, "profile": asdict(prof)})
    for checks, results in outcomes:
        report.checks.extend(checks)
        report.results.extend(results)
    report.write(out)
    failed = sum(not c.passed for c in report.checks)
    click.echo(f"{suite}: {len(report.checks)} checks, {failed} failed")
    bad = report.first_failure()
    if bad is not None:
        click.echo(f"FAIL {bad.name}: value {bad.value!r}, tolerance {bad.tolerance!r}", err=True)
        sys.exit(1)


@main.command("eval")
@click.argument("function", type=click.Choice(["f", "g", "p", "F_n"]))
@click.option("--alpha", type=float, required=True, callback=_order)
@click.option("--m", type=click.IntRange(min=0), help="Index m for f, g and p.")
@click.option("--n", type=click.IntRange(min=1), help="Index n for F_n.")
@click.option("--grid", required=True, callback=_grid, help="start:stop:step, stop included.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), help="Also write a JSON report here.")
def eval_cmd(function, alpha, m, n, grid, fmt, out):
    """Tabulate f_{alpha,m}, g_{alpha,m}, p_{alpha,m} (times the indicator of [0,1]) or F_{alpha,n}."""
    if function == "F_n":
        if n is None:
            raise click.UsageError("F_n needs --n")
        F, _ = thm_hn_function(alpha, n)
        values = F(grid) / F(0.0)
    else:
        if m is None:
            raise click.UsageError(f"{function} needs --m")
        if function == "p":
            values = np.where(grid <= 1.0, build_p(alpha, m)(grid), 0.0)
        else:
            values = ExtremalFunction(alpha, m, Variant.F if function == "f" else Variant.G)(grid)
    rows = [{"t": float(t), "value": float(v)} for t, v in zip(grid, np.atleast_1d(values))]
    if fmt == "csv":
        click.echo("t,value")
        for r in rows:
            click.echo(f"{r['t']!r},{r['value']!r}")
    else:
        click.echo(json.dumps(rows))
    Report("eval", {"function": function, "alpha": alpha, "m": m, "n": n}, rows).write(out)


if __name__ == "__main__":  # pragma: no cover
    main()
