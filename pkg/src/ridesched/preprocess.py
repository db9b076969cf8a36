"""Earliest/latest start times and cumulative waiting-time bounds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import EPS, RouteSequence


class WindowInfeasible(Exception):
    """Lower and upper cumulative waiting bounds cross at ``index``."""

    def __init__(self, index: int):
        super().__init__(f"time windows cannot be met at position {index}")
        self.index = index


@dataclass(frozen=True, eq=False)
class PreprocessedRoute:
    """Per-position vectors derived from a route.

    ``delta[i]`` and ``theta[i]`` bound the total waiting assigned to
    positions ``0..i``. ``load`` counts persons on board on arrival and
    ``weight`` counts requests on board on arrival; the two agree for unit
    loads and ``weight`` is the coefficient of waiting in the excess ride time.
    """

    et: np.ndarray
    lt: np.ndarray
    cum: np.ndarray
    delta: np.ndarray
    theta: np.ndarray
    load: np.ndarray
    weight: np.ndarray
    crossing: int | None = None

    @property
    def window_feasible(self) -> bool:
        return self.crossing is None


def compute_earliest(route: RouteSequence) -> np.ndarray:
    nodes, legs = route.nodes, route.leg_travel
    et = [nodes[0].window_open]
    for i in range(1, len(nodes)):
        et.append(max(nodes[i].window_open, et[-1] + nodes[i - 1].service + legs[i - 1]))
    return np.array(et, dtype=float)


def compute_latest(route: RouteSequence) -> np.ndarray:
    nodes, legs = route.nodes, route.leg_travel
    m = len(nodes)
    lt = [0.0] * m
    lt[-1] = nodes[-1].window_close
    for i in range(m - 2, -1, -1):
        lt[i] = min(nodes[i].window_close, lt[i + 1] - legs[i] - nodes[i].service)
    return np.array(lt, dtype=float)


def cumulative_travel(route: RouteSequence) -> np.ndarray:
    """Travel plus service accumulated before each position."""
    steps = np.array([n.service for n in route.nodes[:-1]], dtype=float)
    steps += np.asarray(route.leg_travel, dtype=float)
    return np.concatenate(([0.0], np.cumsum(steps)))


def cumulative_load(route: RouteSequence) -> np.ndarray:
    deltas = np.array([n.load_delta for n in route.nodes[:-1]], dtype=int)
    return np.concatenate(([0], np.cumsum(deltas))).astype(int)


def onboard_requests(route: RouteSequence) -> np.ndarray:
    """Number of requests whose pickup precedes and dropoff is at or after each position."""
    marks = np.zeros(len(route) + 1, dtype=int)
    for p, d in route.requests:
        marks[p + 1] += 1
        marks[d + 1] -= 1
    return np.cumsum(marks)[:-1]


def first_crossing(delta: np.ndarray, theta: np.ndarray, tol: float = EPS) -> int | None:
    crossed = np.flatnonzero(delta > theta + tol)
    return int(crossed[0]) if crossed.size else None


def _blamed_node(route: RouteSequence, et, delta, theta) -> int | None:
    """Node reported for crossed bounds: the first one the earliest schedule reaches too late.

    Crossed bounds propagate backwards through LT, so the first crossing is
    often the depot; the missed window is the informative position.
    """
    k = first_crossing(delta, theta)
    if k is None:
        return None
    closes = np.array([n.window_close for n in route.nodes], dtype=float)
    late = np.flatnonzero(et > closes + EPS)
    return int(late[0]) if late.size else k


def compute_bounds(
    route: RouteSequence,
    et: np.ndarray,
    lt: np.ndarray,
    check: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(delta, theta)``; raise WindowInfeasible on crossed bounds if ``check``."""
    cum = cumulative_travel(route)
    delta = et - et[0] - cum
    theta = lt - et[0] - cum
    if check:
        k = _blamed_node(route, et, delta, theta)
        if k is not None:
            raise WindowInfeasible(k)
    return delta, theta


def preprocess(route: RouteSequence) -> PreprocessedRoute:
    et = compute_earliest(route)
    lt = compute_latest(route)
    cum = cumulative_travel(route)
    delta = et - et[0] - cum
    theta = lt - et[0] - cum
    return PreprocessedRoute(
        et=et,
        lt=lt,
        cum=cum,
        delta=delta,
        theta=theta,
        load=cumulative_load(route),
        weight=onboard_requests(route),
        crossing=_blamed_node(route, et, delta, theta),
    )
