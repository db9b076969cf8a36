"""Ride-time oriented waiting-time distribution with recourse.

Waiting ``w[i]`` is spent on arrival at position ``i`` before service starts,
so ``T[i] = ET[0] + C[i] + sum(w[:i + 1])``. The scheduler sweeps the route
and, whenever the cumulative waiting falls short of ``delta[i]``, adds waiting
at the cheapest admissible earlier position.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import EPS, InfeasibilityReason, RouteSequence, Schedule, excess_ride_time
from .preprocess import PreprocessedRoute, preprocess


@dataclass
class SchedulerState:
    waits: list[float]
    omega: list[int] = field(default_factory=list)
    cursor: int = 0
    start_node: int = 0
    restarts: int = 0

    @property
    def total(self) -> float:
        return sum(self.waits)


class _Route:
    """Flattened view of a route used by the inner loops."""

    __slots__ = ("m", "delta", "theta", "weight", "pairs", "caps")

    def __init__(self, route: RouteSequence, pre: PreprocessedRoute):
        self.m = len(route)
        self.delta = pre.delta.tolist()
        self.theta = pre.theta.tolist()
        self.weight = pre.weight.tolist()
        self.pairs = list(route.requests)
        cum = pre.cum
        self.caps = []
        for p, d in self.pairs:
            pickup = route.nodes[p]
            # ride time with no waiting: travel plus inner services
            base = cum[d] - cum[p] - pickup.service
            self.caps.append(float(pickup.max_ride - base))


def _prefix(waits: list[float]) -> list[float]:
    out, acc = [], 0.0
    for w in waits:
        acc += w
        out.append(acc)
    return out


def _ride_slack(r: _Route, k: int, pref: list[float]) -> float:
    p, d = r.pairs[k]
    return r.caps[k] - (pref[d] - pref[p])


def _slack(j: int, r: _Route, pref: list[float]) -> float:
    """Room for extra waiting at ``j`` from ride times and latest start times."""
    room = min(r.theta[m] - pref[m] for m in range(j, r.m))
    for k, (p, d) in enumerate(r.pairs):
        # waiting at j lengthens the rides of requests with p < j <= d
        if p < j <= d:
            room = min(room, r.caps[k] - (pref[d] - pref[p]))
    return room


def max_wait_increment(
    j: int, state: SchedulerState, route: RouteSequence, pre: PreprocessedRoute
) -> float:
    """Largest feasible waiting increment at ``j`` for the shortage at the cursor."""
    r = _Route(route, pre)
    return _increment(j, state.cursor, r, state.waits)


def _increment(j: int, i: int, r: _Route, waits: list[float]) -> float:
    pref = _prefix(waits)
    shortage = r.delta[i] - pref[i]
    return max(0.0, min(_slack(j, r, pref), shortage))


def argmin_load(omega, weights) -> int:
    """Smallest index in ``omega`` among those of minimal weight."""
    best = None
    for j in sorted(omega):
        if best is None or weights[j] < weights[best]:
            best = j
    if best is None:
        raise ValueError("empty candidate set")
    return best


@dataclass
class Restart:
    start_node: int
    waits: list[float]


def recourse(state: SchedulerState, route: RouteSequence, pre: PreprocessedRoute):
    """Shift waiting onto the pickup of a request that hit its ride-time limit.

    Returns a Restart, or None when no candidate admits a positive increment.
    """
    return _recourse(state.cursor, _Route(route, pre), state.waits)


def _saturated_pickups(i: int, r: _Route, waits: list[float]) -> list[int]:
    pref = _prefix(waits)
    return sorted(
        p for k, (p, d) in enumerate(r.pairs) if p <= i and _ride_slack(r, k, pref) <= EPS
    )


def _recourse(i: int, r: _Route, waits: list[float]) -> Restart | None:
    for j in _saturated_pickups(i, r, waits):
        trial = waits[: j + 1] + [0.0] * (r.m - j - 1)
        delta_w = _increment(j, i, r, trial)
        if delta_w > EPS:
            trial[j] += delta_w
            return Restart(j + 1, trial)
    return None


def build_times(waits, pre: PreprocessedRoute) -> np.ndarray:
    return pre.et[0] + pre.cum + np.cumsum(np.asarray(waits, dtype=float))


def _finish(route, pre, waits, reason=None, node=None, restarts=0) -> Schedule:
    w = np.asarray(waits, dtype=float)
    starts = build_times(w, pre)
    return Schedule(
        waits=w,
        starts=starts,
        excess=excess_ride_time(route, starts),
        reason=reason,
        node=node,
        restarts=restarts,
    )


def schedule_route(
    route: RouteSequence,
    pre: PreprocessedRoute | None = None,
    *,
    use_recourse: bool = True,
    max_restarts: int | None = None,
) -> Schedule:
    """Minimum excess ride time schedule for a fixed route.

    Stations are treated as ordinary zero-load positions. ``max_restarts``
    defaults to the number of requests in the route.
    """
    if pre is None:
        pre = preprocess(route)
    m = len(route)
    if pre.crossing is not None:
        return _finish(route, pre, [0.0] * m, InfeasibilityReason.TIME_WINDOW, pre.crossing)
    r = _Route(route, pre)
    for k, cap in enumerate(r.caps):
        if cap < -EPS:
            return _finish(route, pre, [0.0] * m, InfeasibilityReason.RIDE_TIME, r.pairs[k][1])
    if max_restarts is None:
        max_restarts = len(r.pairs)

    waits = [0.0] * m
    omega: list[int] = []
    restarts = 0
    total = 0.0  # waits beyond the cursor are always zero
    i = 0
    while i < m:
        if i not in omega:
            omega.append(i)
        restarted = False
        while r.delta[i] - total > EPS:
            if not omega:
                fix = _recourse(i, r, waits) if use_recourse else None
                if fix is None:
                    if _saturated_pickups(i, r, waits):
                        reason = InfeasibilityReason.RIDE_TIME
                    else:
                        reason = InfeasibilityReason.WAIT_SHORTAGE
                    return _finish(route, pre, waits, reason, i, restarts)
                restarts += 1
                if restarts > max_restarts:
                    return _finish(
                        route, pre, waits, InfeasibilityReason.RIDE_TIME, i, restarts
                    )
                waits = fix.waits
                total = sum(waits)
                pref = _prefix(waits)
                omega = [k for k in range(fix.start_node) if _slack(k, r, pref) > EPS]
                # the pickup may be the cursor itself, whose shortage is not yet covered
                i = min(fix.start_node, i)
                restarted = True
                break
            j = argmin_load(omega, r.weight)
            shortage = r.delta[i] - total
            pref = _prefix(waits)
            step = max(0.0, min(_slack(j, r, pref), shortage))
            waits[j] += step
            total += step
            if step < shortage - EPS:
                omega.remove(j)
        if not restarted:
            i += 1
    return _finish(route, pre, waits, restarts=restarts)
