"""Exact LP models of the timing problem and the audit of heuristic results."""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass

import numpy as np

from .battery import BatteryParams
from .model import EPS, RouteSequence, Schedule
from .preprocess import PreprocessedRoute
from .simplex import LinearProgram, LPResult, Status, solve

REL_TOL = 1e-6


def routing_constant(route: RouteSequence, pre: PreprocessedRoute) -> float:
    """Excess ride time of the schedule that waits nowhere."""
    total = 0.0
    for p, d in route.requests:
        pickup = route.nodes[p]
        total += pre.cum[d] - pre.cum[p] - pickup.service - route.direct_travel[pickup.id]
    return float(total)


def ride_capacity(route: RouteSequence, pre: PreprocessedRoute, p: int, d: int) -> float:
    """Waiting that request (p, d) can absorb between its pickup and dropoff."""
    pickup = route.nodes[p]
    return float(pickup.max_ride - (pre.cum[d] - pre.cum[p] - pickup.service))


def build_lp2(route: RouteSequence, pre: PreprocessedRoute) -> LinearProgram:
    """Waiting-time LP: ``min sum(weight * w)`` under cumulative and ride bounds."""
    m = len(route)
    lp = LinearProgram.empty(m, lower=0.0, names=[f"w{i}" for i in range(m)])
    lp.c = pre.weight.astype(float)
    for i in range(m):
        lp.add_range({j: 1.0 for j in range(i + 1)}, pre.delta[i], pre.theta[i])
    for p, d in route.requests:
        lp.add_constraint(
            {j: 1.0 for j in range(p + 1, d + 1)}, "<=", ride_capacity(route, pre, p, d)
        )
    return lp


def _add_timing(lp: LinearProgram, route: RouteSequence, t0: int = 0) -> None:
    nodes, legs = route.nodes, route.leg_travel
    for i in range(len(nodes) - 1):
        lp.add_constraint({t0 + i + 1: 1.0, t0 + i: -1.0}, ">=", nodes[i].service + legs[i])
    offset = 0.0
    for p, d in route.requests:
        pickup = nodes[p]
        lp.add_constraint({t0 + d: 1.0, t0 + p: -1.0}, "<=", pickup.max_ride + pickup.service)
        lp.c[t0 + d] += 1.0
        lp.c[t0 + p] -= 1.0
        offset -= pickup.service + route.direct_travel[pickup.id]
    lp.offset += offset


def build_lp1(route: RouteSequence) -> LinearProgram:
    """Start-time LP over the raw time windows; its objective is the excess ride time."""
    m = len(route)
    lp = LinearProgram.empty(
        m,
        lower=[n.window_open for n in route.nodes],
        upper=[n.window_close for n in route.nodes],
        names=[f"T{i}" for i in range(m)],
    )
    _add_timing(lp, route)
    return lp


def build_lp1_battery(
    route: RouteSequence, params: BatteryParams, pre: PreprocessedRoute | None = None
) -> LinearProgram:
    """Start-time LP with battery levels ``B`` and charging durations ``E``.

    Variable layout: ``T[0..m)``, then ``B[0..m)``, then one ``E`` per
    station in route order. Charging may stop before the vehicle leaves the
    station, so ``E`` is bounded by the dwell rather than equal to it.
    Start times are bounded by the raw windows; ``pre`` is accepted for
    interface symmetry with ``build_lp2`` and not needed.
    """
    m = len(route)
    nodes, legs = route.nodes, route.leg_travel
    stations = route.stations
    n_e = len(stations)
    q = params.capacity
    lower = [n.window_open for n in nodes] + [0.0] * m + [0.0] * n_e
    upper = [n.window_close for n in nodes] + [q] * m + [np.inf] * n_e
    names = [f"T{i}" for i in range(m)] + [f"B{i}" for i in range(m)]
    names += [f"E{s}" for s in stations]
    lp = LinearProgram.empty(m + m + n_e, lower=lower, upper=upper, names=names)
    _add_timing(lp, route)
    b0, e0 = m, 2 * m
    e_index = {s: e0 + k for k, s in enumerate(stations)}

    lp.add_constraint({b0: 1.0}, "=", params.init)
    for i in range(m - 1):
        spend = params.discharge * legs[i]
        if i in e_index:
            e = e_index[i]
            alpha = params.charge_rate[nodes[i].id]
            lp.add_constraint({b0 + i + 1: 1.0, b0 + i: -1.0, e: -alpha}, "=", -spend)
            lp.add_constraint({b0 + i: 1.0, e: alpha}, "<=", q)
            lp.add_constraint(
                {i + 1: 1.0, i: -1.0, e: -1.0}, ">=", legs[i] + nodes[i].service
            )
        else:
            lp.add_constraint({b0 + i + 1: 1.0, b0 + i: -1.0}, "=", -spend)
    lp.add_constraint({b0 + m - 1: 1.0}, ">=", params.end_ratio * q)
    return lp


@dataclass
class OracleResult:
    status: Status
    excess: float | None = None
    starts: np.ndarray | None = None
    lp: LPResult | None = None

    @property
    def feasible(self) -> bool:
        return self.status is Status.OPTIMAL


def relaxed(lp: LinearProgram, tol: float = EPS) -> LinearProgram:
    """Copy of ``lp`` with every row range and variable bound widened by ``tol``."""
    return dataclasses.replace(
        lp,
        lower=lp.lower - tol,
        upper=lp.upper + tol,
        rows=list(lp.rows),
        row_lo=[lo - tol for lo in lp.row_lo],
        row_hi=[hi + tol for hi in lp.row_hi],
    )


def solve_route(route: RouteSequence, params: BatteryParams | None = None) -> OracleResult:
    """Exact minimum excess ride time (with battery constraints if ``params``).

    Feasibility is judged at the model tolerance ``EPS``, like the heuristics
    and the constraint checker: a route is infeasible only when the LP stays
    infeasible with every constraint relaxed by ``EPS``. Strictly feasible
    routes get the optimum of the unrelaxed LP.
    """
    lp = build_lp1(route) if params is None else build_lp1_battery(route, params)
    res = solve(lp)
    if res.status is Status.INFEASIBLE:
        res = solve(relaxed(lp))
    if not res.optimal:
        return OracleResult(res.status, lp=res)
    return OracleResult(res.status, excess=res.objective, starts=res.x[: len(route)], lp=res)


class Outcome(enum.Enum):
    BOTH_INFEASIBLE = "both_infeasible"
    INCORRECT_INFEASIBILITY = "incorrect_infeasibility"
    OPTIMAL = "optimal"
    DEVIATING = "deviating"
    UNSOUND_FEASIBLE = "unsound_feasible"


@dataclass
class AuditRecord:
    outcome: Outcome
    heuristic: float | None = None
    optimum: float | None = None
    deviation: float | None = None
    absolute: float | None = None
    zero_optimum: bool = False


def audit(route: RouteSequence, heuristic: Schedule, oracle: OracleResult) -> AuditRecord:
    """Classify a heuristic result against the exact optimum.

    ``deviation`` is relative, ``(heur - opt) / max(opt, EPS)``; when the
    optimum is zero the absolute gap is what matters and ``zero_optimum`` is set.
    """
    if not heuristic.feasible:
        if oracle.feasible:
            return AuditRecord(Outcome.INCORRECT_INFEASIBILITY, optimum=oracle.excess)
        return AuditRecord(Outcome.BOTH_INFEASIBLE)
    if not oracle.feasible:
        return AuditRecord(Outcome.UNSOUND_FEASIBLE, heuristic=heuristic.excess)
    heur, opt = heuristic.excess, oracle.excess
    gap = heur - opt
    if abs(gap) <= REL_TOL * max(1.0, abs(opt)):
        return AuditRecord(Outcome.OPTIMAL, heur, opt, 0.0, gap)
    zero = abs(opt) <= EPS
    return AuditRecord(
        Outcome.DEVIATING, heur, opt, gap / max(opt, EPS), gap, zero_optimum=zero
    )

