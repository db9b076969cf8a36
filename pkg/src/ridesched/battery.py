"""Charging plans for electric vehicles on a scheduled route.

The battery level is swept along the route. At each station the vehicle
charges as much as it can, as early as it can: waiting assigned before the
station is pulled forward so the station is reached at its earliest
admissible time, and the dwell is then filled with charging up to a full
battery or until the next node's latest start forces departure.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .model import (
    EPS,
    InfeasibilityReason,
    NodeKind,
    RouteSequence,
    Schedule,
    Violation,
    excess_ride_time,
)
from .preprocess import PreprocessedRoute, preprocess


@dataclass(frozen=True)
class BatteryParams:
    capacity: float
    init: float
    end_ratio: float
    discharge: float
    charge_rate: dict[int, float]

    def __post_init__(self):
        object.__setattr__(self, "charge_rate", dict(self.charge_rate))
        if not 0.0 <= self.init <= self.capacity:
            raise ValueError("initial battery level outside [0, capacity]")
        if not 0.0 <= self.end_ratio <= 1.0:
            raise ValueError("end ratio outside [0, 1]")
        if self.discharge <= 0 or any(a <= 0 for a in self.charge_rate.values()):
            raise ValueError("rates must be positive")

    @property
    def end_level(self) -> float:
        return self.end_ratio * self.capacity


@dataclass
class BatteryPlan:
    levels: np.ndarray
    charges: dict[int, float]
    schedule: Schedule
    reason: InfeasibilityReason | None = None
    node: int | None = None

    @property
    def feasible(self) -> bool:
        return self.reason is None

    @property
    def verdict(self) -> str:
        if self.reason is None:
            return "feasible"
        return f"infeasible({self.reason.value}@{self.node})"


def split_at_stations(route: RouteSequence) -> list[RouteSequence]:
    """Cut the route at every station; the station closes one piece and opens the next."""
    cuts = [0] + route.stations + [len(route) - 1]
    pieces = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        nodes = list(route.nodes[a : b + 1])
        nodes[0] = dataclasses.replace(nodes[0], kind=NodeKind.ORIGIN_DEPOT)
        nodes[-1] = dataclasses.replace(nodes[-1], kind=NodeKind.DESTINATION_DEPOT)
        ids = {n.id for n in nodes}
        pieces.append(
            RouteSequence(
                nodes=tuple(nodes),
                leg_travel=route.leg_travel[a:b],
                direct_travel={k: v for k, v in route.direct_travel.items() if k in ids},
                capacity=route.capacity,
                instance_id=route.instance_id,
                vehicle_id=route.vehicle_id,
            )
        )
    return pieces


def plan_charging(
    route: RouteSequence,
    schedule: Schedule,
    params: BatteryParams,
    pre: PreprocessedRoute | None = None,
) -> BatteryPlan:
    """Assign charging durations along a time-feasible schedule.

    Returns a plan whose ``schedule`` carries the start times after charging
    dwell has been inserted; that schedule is still time feasible and its
    excess ride time is no larger than the input's. A battery failure is
    also recorded on that schedule, so its verdict covers both checks.
    """
    if pre is None:
        pre = preprocess(route)
    m = len(route)
    nodes, legs = route.nodes, route.leg_travel
    cum = np.cumsum(np.asarray(schedule.waits, dtype=float))
    floor, fixed = 0.0, -1
    level = params.init
    levels = np.zeros(m)
    charges: dict[int, float] = {}
    reason = node = None
    for i in range(m):
        if i > 0:
            level -= params.discharge * legs[i - 1]
        levels[i] = level
        if level < -EPS and reason is None:
            reason, node = InfeasibilityReason.BATTERY, i
        if nodes[i].kind is not NodeKind.STATION or i == m - 1:
            continue
        # arrive as early as the bounds allow; the removed waiting moves past the station
        cap = max(pre.delta[i], floor)
        cum[fixed + 1 : i + 1] = np.minimum(cum[fixed + 1 : i + 1], cap)
        dwell = pre.theta[i + 1] - cum[i]
        room = (params.capacity - level) / params.charge_rate[nodes[i].id]
        e = max(0.0, min(dwell, room))
        charges[i] = e
        # later waiting may be pulled back to the end of this charge, not further
        floor, fixed = cum[i] + e, i
        np.maximum(cum[i + 1 :], floor, out=cum[i + 1 :])
        level += params.charge_rate[nodes[i].id] * e
    if reason is None and level < params.end_level - EPS:
        reason, node = InfeasibilityReason.BATTERY, m - 1
    waits = np.diff(np.concatenate(([0.0], cum)))
    np.maximum(waits, 0.0, out=waits)
    starts = pre.et[0] + pre.cum + cum
    timed = Schedule(
        waits=waits,
        starts=starts,
        excess=excess_ride_time(route, starts),
        reason=schedule.reason or reason,
        node=schedule.node if schedule.reason else node,
        restarts=schedule.restarts,
    )
    return BatteryPlan(levels, charges, timed, reason, node)


def check_battery_constraints(
    route: RouteSequence,
    schedule: Schedule,
    plan: BatteryPlan,
    params: BatteryParams,
    tol: float = EPS,
) -> list[Violation]:
    """Re-derive the battery constraints from raw data; empty when all hold."""
    out: list[Violation] = []
    nodes, legs = route.nodes, route.leg_travel
    b, t = plan.levels, schedule.starts
    q = params.capacity
    if abs(b[0] - params.init) > tol:
        out.append(Violation("batt1", 0, abs(b[0] - params.init)))
    for i in range(len(nodes) - 1):
        e = plan.charges.get(i, 0.0)
        if nodes[i].kind is NodeKind.STATION:
            alpha = params.charge_rate[nodes[i].id]
            if e < -tol:
                out.append(Violation("batt11", i, -e))
            if b[i] + alpha * e > q + tol:
                out.append(Violation("batt6", i, b[i] + alpha * e - q))
            dwell = t[i + 1] - legs[i] - t[i] - nodes[i].service
            if e > dwell + tol:
                out.append(Violation("batt8", i, e - dwell))
            expect = b[i] + alpha * e - params.discharge * legs[i]
            rule = "batt4"
        else:
            if e != 0.0:
                out.append(Violation("batt11", i, abs(e)))
            expect = b[i] - params.discharge * legs[i]
            rule = "batt2"
        if abs(b[i + 1] - expect) > tol:
            out.append(Violation(rule, i + 1, abs(b[i + 1] - expect)))
    for i, level in enumerate(b):
        if level < -tol:
            out.append(Violation("batt10", i, -level))
        elif level > q + tol:
            out.append(Violation("batt10", i, level - q))
    if b[-1] < params.end_level - tol:
        out.append(Violation("batt7", len(nodes) - 1, params.end_level - b[-1]))
    return out


def schedule_with_battery(route: RouteSequence, params: BatteryParams, pre=None):
    """Time schedule followed by a charging plan; returns ``(schedule, plan)``.

    The plan is None when the route is already time infeasible.
    """
    from .scheduler import schedule_route

    if pre is None:
        pre = preprocess(route)
    sched = schedule_route(route, pre)
    if not sched.feasible:
        return sched, None
    plan = plan_charging(route, sched, params, pre)
    return plan.schedule, plan
