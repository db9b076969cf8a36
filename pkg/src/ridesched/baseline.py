"""Classical eight-step forward-slack scheduling, used as a comparison baseline.

Service starts are first set as early as possible. Departure from the depot
is then delayed by as much of the route's waiting as the forward slack
allows, and afterwards each pickup is delayed the same way in route order.
The ride-time aware forward slack of a position ``i`` is

    F_i = min over j >= i of ( sum of waits in (i, j] + max(0, min(l_j - B_j, u - R_j)) )

where ``R_j`` is the current ride time of the passenger dropped at ``j``
when that passenger was picked up before ``i`` (otherwise the term is
ignored). Feasibility is checked only once, at the end.
"""

from __future__ import annotations

import numpy as np

from .model import (
    InfeasibilityReason,
    NodeKind,
    RouteSequence,
    Schedule,
    check_schedule,
    excess_ride_time,
)
from .preprocess import PreprocessedRoute, preprocess


class _Timeline:
    def __init__(self, route: RouteSequence):
        nodes = route.nodes
        self.route = route
        self.opens = [n.window_open for n in nodes]
        self.closes = [n.window_close for n in nodes]
        self.service = [n.service for n in nodes]
        self.legs = list(route.leg_travel)
        self.pickup_of = {d: p for p, d in route.requests}
        m = len(nodes)
        self.arrive = [0.0] * m
        self.start = [0.0] * m
        self.start[0] = self.arrive[0] = self.opens[0]

    def propagate(self, k: int) -> None:
        """Recompute arrivals and starts after position ``k``."""
        for p in range(k + 1, len(self.start)):
            self.arrive[p] = self.start[p - 1] + self.service[p - 1] + self.legs[p - 1]
            self.start[p] = max(self.arrive[p], self.opens[p])

    def wait(self, p: int) -> float:
        return self.start[p] - self.arrive[p]

    def forward_slack(self, i: int) -> tuple[float, float]:
        """Forward slack at ``i`` and the total waiting after ``i``."""
        best = np.inf
        waited = 0.0
        route = self.route
        for j in range(i, len(self.start)):
            if j > i:
                waited += self.wait(j)
            room = self.closes[j] - self.start[j]
            p = self.pickup_of.get(j)
            if p is not None and p < i:
                pickup = route.nodes[p]
                ride = self.start[j] - self.start[p] - pickup.service
                room = min(room, pickup.max_ride - ride)
            best = min(best, waited + max(0.0, room))
        return best, waited


def eight_step(route: RouteSequence, pre: PreprocessedRoute | None = None) -> Schedule:
    """Schedule ``route`` with the forward-slack procedure; verdict from a final check."""
    if pre is None:
        pre = preprocess(route)
    tl = _Timeline(route)
    tl.propagate(0)
    slack, waited = tl.forward_slack(0)
    tl.start[0] = tl.opens[0] + min(slack, waited)
    tl.arrive[0] = tl.opens[0]
    tl.propagate(0)
    for j, node in enumerate(route.nodes):
        if node.kind is not NodeKind.PICKUP:
            continue
        slack, waited = tl.forward_slack(j)
        tl.start[j] = tl.start[j] + min(slack, waited)
        tl.propagate(j)

    starts = np.asarray(tl.start, dtype=float)
    cum = starts - pre.et[0] - pre.cum
    waits = np.diff(np.concatenate(([0.0], cum)))
    reason = node = None
    violations = check_schedule(route, starts)
    if violations:
        windows = [v for v in violations if v.rule.startswith("window")]
        first = windows[0] if windows else violations[0]
        reason = InfeasibilityReason.TIME_WINDOW if windows else InfeasibilityReason.RIDE_TIME
        node = first.index
    return Schedule(
        waits=waits,
        starts=starts,
        excess=excess_ride_time(route, starts),
        reason=reason,
        node=node,
    )
