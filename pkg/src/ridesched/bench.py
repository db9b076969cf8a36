"""Run schedulers over a corpus, audit them against the LP oracle, and summarise."""

from __future__ import annotations

import statistics
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .baseline import eight_step
from .battery import BatteryParams, plan_charging
from .ingest import ReportRow
from .model import InfeasibilityReason, RouteSequence, Schedule
from .oracle import OracleResult, Outcome, audit, solve_route
from .preprocess import preprocess
from .scheduler import schedule_route

ORACLE = "oracle"
RESERVED = ("parragh", "molenbruch")


def _alg1(route: RouteSequence, params: BatteryParams | None) -> Schedule:
    pre = preprocess(route)
    sched = schedule_route(route, pre)
    if params is None or not sched.feasible:
        return sched
    return plan_charging(route, sched, params, pre).schedule


def _eight_step(route: RouteSequence, params: BatteryParams | None) -> Schedule:
    pre = preprocess(route)
    sched = eight_step(route, pre)
    if params is None or not sched.feasible:
        return sched
    return plan_charging(route, sched, params, pre).schedule


def _oracle(route: RouteSequence, params: BatteryParams | None) -> OracleResult:
    return solve_route(route, params)


ALGORITHMS: dict[str, Callable] = {
    "alg1": _alg1,
    "eight-step": _eight_step,
    ORACLE: _oracle,
}


def parse_algorithms(text: str) -> list[str]:
    names = [a.strip() for a in text.split(",") if a.strip()]
    for a in names:
        if a in RESERVED:
            raise ValueError(f"algorithm {a!r} is reserved but not implemented")
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}")
    return names


def run_algorithm(name: str, route: RouteSequence, params: BatteryParams | None = None):
    return ALGORITHMS[name](route, params)


def timed(fn: Callable[[], object], repeats: int = 3) -> tuple[object, float]:
    """Result of ``fn`` and the median of ``repeats`` timed calls in ms, after one warm-up call."""
    result = fn()
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        fn()
        samples.append((time.perf_counter_ns() - t0) / 1e6)
    return result, statistics.median(samples)


@dataclass
class RouteResult:
    alg: str
    size: int
    feasible: bool
    excess: float | None
    reason: InfeasibilityReason | None
    node: int | None
    cpu_ms: float

    @property
    def verdict(self) -> str:
        if self.feasible:
            return "feasible"
        if self.reason is None:
            return "infeasible"
        return f"infeasible({self.reason.value}@{self.node})"


def evaluate(
    name: str, route: RouteSequence, params: BatteryParams | None = None, repeats: int = 3
) -> tuple[RouteResult, object]:
    """Run one algorithm on one route; returns the summary and the raw result."""
    res, ms = timed(lambda: run_algorithm(name, route, params), repeats)
    if isinstance(res, OracleResult):
        summary = RouteResult(name, len(route), res.feasible, res.excess, None, None, ms)
    else:
        summary = RouteResult(
            name, len(route), res.feasible, res.excess if res.feasible else None,
            res.reason, res.node, ms,
        )
    return summary, res


@dataclass
class BenchRow:
    """Counts for one (instance, algorithm) pair."""

    name: str
    alg: str
    n_routes: int = 0
    size_min: int = 0
    size_max: int = 0
    n_infeasible: int = 0
    n_incorrect: int = 0
    n_deviating: int = 0
    n_unsound: int = 0
    n_optimal: int = 0
    deviations: list[float] = field(default_factory=list)
    cpu_ms: list[float] = field(default_factory=list)
    causes: Counter = field(default_factory=Counter)
    failures: list[tuple[int, Outcome]] = field(default_factory=list)

    def add(self, index: int, res: RouteResult, outcome: Outcome | None, deviation: float | None):
        self.size_min = res.size if self.n_routes == 0 else min(self.size_min, res.size)
        self.size_max = max(self.size_max, res.size)
        self.n_routes += 1
        self.cpu_ms.append(res.cpu_ms)
        if not res.feasible:
            self.n_infeasible += 1
            if res.reason is not None:
                self.causes[res.reason.value] += 1
        if outcome is Outcome.INCORRECT_INFEASIBILITY:
            self.n_incorrect += 1
            self.failures.append((index, outcome))
        elif outcome is Outcome.UNSOUND_FEASIBLE:
            self.n_unsound += 1
            self.failures.append((index, outcome))
        elif outcome is Outcome.DEVIATING:
            self.n_deviating += 1
            self.deviations.append(deviation)
        elif outcome is Outcome.OPTIMAL:
            self.n_optimal += 1

    @property
    def n_oracle_feasible(self) -> int:
        return self.n_optimal + self.n_deviating + self.n_incorrect

    @property
    def avg_dev_pct(self) -> float:
        return 100.0 * statistics.fmean(self.deviations) if self.deviations else 0.0

    @property
    def avg_cpu_ms(self) -> float:
        return statistics.fmean(self.cpu_ms) if self.cpu_ms else 0.0

    @property
    def median_cpu_ms(self) -> float:
        return statistics.median(self.cpu_ms) if self.cpu_ms else 0.0

    def report_row(self) -> ReportRow:
        return ReportRow(
            self.name,
            self.n_routes,
            self.size_min,
            self.size_max,
            self.alg,
            self.n_infeasible,
            self.n_deviating,
            self.avg_dev_pct,
            self.avg_cpu_ms,
        )


@dataclass
class BenchReport:
    rows: list[BenchRow]

    def row(self, name: str, alg: str) -> BenchRow:
        for r in self.rows:
            if r.name == name and r.alg == alg:
                return r
        raise KeyError((name, alg))

    def total(self, alg: str) -> BenchRow:
        """All instances pooled for one algorithm."""
        out = BenchRow("all", alg)
        for r in self.rows:
            if r.alg != alg or r.n_routes == 0:
                continue
            out.size_min = r.size_min if out.n_routes == 0 else min(out.size_min, r.size_min)
            out.size_max = max(out.size_max, r.size_max)
            for name in ("n_routes", "n_infeasible", "n_incorrect", "n_deviating", "n_unsound", "n_optimal"):
                setattr(out, name, getattr(out, name) + getattr(r, name))
            out.deviations += r.deviations
            out.cpu_ms += r.cpu_ms
            out.causes += r.causes
            out.failures += r.failures
        return out

    def report_rows(self) -> list[ReportRow]:
        return [r.report_row() for r in self.rows]


def _bench_one(args):
    index, route, algs, params, repeats = args
    oracle_summary, oracle_res = evaluate(ORACLE, route, params, repeats)
    out = []
    for alg in algs:
        if alg == ORACLE:
            out.append((alg, oracle_summary, None, None))
            continue
        summary, res = evaluate(alg, route, params, repeats)
        rec = audit(route, res, oracle_res)
        out.append((alg, summary, rec.outcome, rec.deviation))
    return index, route.instance_id, out


def bench(
    routes: Iterable[RouteSequence],
    algs: Sequence[str],
    params: Mapping[str, BatteryParams | None] | None = None,
    repeats: int = 3,
    jobs: int = 1,
) -> BenchReport:
    """Audit every algorithm in ``algs`` on every route; the oracle is always run.

    Rows come out in first-seen instance order, then in the order of ``algs``
    (with the oracle appended if it was not requested). Counts do not depend
    on ``jobs``.
    """
    params = params or {}
    algs = list(algs) + ([ORACLE] if ORACLE not in algs else [])
    tasks = (
        (k, r, algs, params.get(r.instance_id), repeats) for k, r in enumerate(routes)
    )
    rows: dict[tuple[str, str], BenchRow] = {}
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_bench_one, tasks, chunksize=64))
    else:
        results = map(_bench_one, tasks)
    for index, name, out in results:
        for alg, summary, outcome, deviation in out:
            row = rows.setdefault((name, alg), BenchRow(name, alg))
            row.add(index, summary, outcome, deviation)
    return BenchReport(list(rows.values()))


@dataclass
class CheckResult:
    label: str
    passed: bool
    detail: str


def acceptance_checks(report: BenchReport, alg: str = "alg1") -> list[CheckResult]:
    """Soundness, incorrect-infeasibility and deviation thresholds for ``alg``."""
    tot = report.total(alg)
    feas = max(tot.n_oracle_feasible, 1)
    incorrect = tot.n_incorrect / feas
    deviating = tot.n_deviating / feas
    return [
        CheckResult("unsound feasible = 0", tot.n_unsound == 0, f"{tot.n_unsound}"),
        CheckResult(
            "incorrect infeasibility <= 0.01%",
            incorrect <= 1e-4,
            f"{tot.n_incorrect}/{tot.n_oracle_feasible} = {100 * incorrect:.4f}%",
        ),
        CheckResult(
            "deviating <= 0.1% and mean deviation <= 5%",
            deviating <= 1e-3 and tot.avg_dev_pct <= 5.0,
            f"{tot.n_deviating}/{tot.n_oracle_feasible} = {100 * deviating:.4f}%, "
            f"mean {tot.avg_dev_pct:.3f}%",
        ),
    ]
