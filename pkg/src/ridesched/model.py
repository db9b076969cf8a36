"""Domain types for fixed-sequence dial-a-ride scheduling.

Positions in a route are 0-based. Node ids are the instance ids and are only
used for partner links, direct travel lookups and corpus records.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, NamedTuple, Sequence

import numpy as np

EPS = 1e-6


class NodeKind(enum.Enum):
    ORIGIN_DEPOT = "origin"
    PICKUP = "pickup"
    DROPOFF = "dropoff"
    STATION = "station"
    DESTINATION_DEPOT = "destination"


class InfeasibilityReason(enum.Enum):
    TIME_WINDOW = "TW"
    RIDE_TIME = "RT"
    BATTERY = "BATT"
    WAIT_SHORTAGE = "WS"


@dataclass(frozen=True)
class Node:
    id: int
    kind: NodeKind
    load_delta: int = 0
    service: float = 0.0
    window_open: float = 0.0
    window_close: float = float("inf")
    max_ride: float | None = None
    partner: int | None = None


@dataclass(frozen=True, eq=False)
class RouteSequence:
    """An ordered route with its travel data.

    ``leg_travel[k]`` is the travel time from position ``k`` to ``k + 1``;
    ``direct_travel`` maps a pickup node id to the direct pickup-to-dropoff
    travel time.
    """

    nodes: tuple[Node, ...]
    leg_travel: tuple[float, ...]
    direct_travel: Mapping[int, float]
    capacity: int
    instance_id: str = ""
    vehicle_id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "leg_travel", tuple(float(t) for t in self.leg_travel))
        object.__setattr__(self, "direct_travel", dict(self.direct_travel))
        if len(self.leg_travel) != max(len(self.nodes) - 1, 0):
            raise ValueError(
                f"expected {max(len(self.nodes) - 1, 0)} legs, got {len(self.leg_travel)}"
            )

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other):
        if not isinstance(other, RouteSequence):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.leg_travel == other.leg_travel
            and self.direct_travel == other.direct_travel
            and self.capacity == other.capacity
            and self.instance_id == other.instance_id
            and self.vehicle_id == other.vehicle_id
        )

    __hash__ = None

    @cached_property
    def position(self) -> dict[int, int]:
        return {node.id: k for k, node in enumerate(self.nodes)}

    @cached_property
    def requests(self) -> tuple[tuple[int, int], ...]:
        """(pickup position, dropoff position) pairs, ordered by pickup."""
        pairs = []
        for k, node in enumerate(self.nodes):
            if node.kind is NodeKind.PICKUP and node.partner in self.position:
                pairs.append((k, self.position[node.partner]))
        return tuple(pairs)

    @property
    def n_requests(self) -> int:
        return len(self.requests)

    @property
    def stations(self) -> list[int]:
        return [k for k, n in enumerate(self.nodes) if n.kind is NodeKind.STATION]


@dataclass
class Schedule:
    waits: np.ndarray
    starts: np.ndarray
    excess: float
    reason: InfeasibilityReason | None = None
    node: int | None = None
    restarts: int = 0

    @property
    def feasible(self) -> bool:
        return self.reason is None

    @property
    def verdict(self) -> str:
        if self.reason is None:
            return "feasible"
        return f"infeasible({self.reason.value}@{self.node})"


class Violation(NamedTuple):
    rule: str
    index: int
    amount: float = 0.0


def route_from_arrays(
    loads: Sequence[int],
    services: Sequence[float],
    opens: Sequence[float],
    closes: Sequence[float],
    legs: Sequence[float],
    pairs: Sequence[tuple[int, int]],
    direct: Sequence[float],
    max_rides: Sequence[float],
    capacity: int | None = None,
    stations: Sequence[int] = (),
) -> RouteSequence:
    """Build a route from per-position arrays; node ids equal positions.

    ``pairs`` lists (pickup position, dropoff position); ``direct`` and
    ``max_rides`` are aligned with ``pairs``.
    """
    m = len(loads)
    kinds = [NodeKind.STATION if k in set(stations) else None for k in range(m)]
    partner: dict[int, int] = {}
    ride: dict[int, float] = {}
    for (p, d), u in zip(pairs, max_rides):
        partner[p], partner[d] = d, p
        kinds[p], kinds[d] = NodeKind.PICKUP, NodeKind.DROPOFF
        ride[p] = float(u)
    kinds[0] = NodeKind.ORIGIN_DEPOT
    kinds[-1] = NodeKind.DESTINATION_DEPOT
    nodes = []
    for k in range(m):
        kind = kinds[k] or NodeKind.STATION
        nodes.append(
            Node(
                id=k,
                kind=kind,
                load_delta=int(loads[k]),
                service=float(services[k]),
                window_open=float(opens[k]),
                window_close=float(closes[k]),
                max_ride=ride.get(k),
                partner=partner.get(k),
            )
        )
    if capacity is None:
        capacity = max(int(np.max(np.cumsum(loads))), 1) if m else 1
    return RouteSequence(
        nodes=tuple(nodes),
        leg_travel=tuple(legs),
        direct_travel={p: float(t) for (p, _), t in zip(pairs, direct)},
        capacity=capacity,
    )


def validate_structure(route: RouteSequence) -> list[Violation]:
    """List every structural problem of ``route``; empty when well formed."""
    out: list[Violation] = []
    nodes = route.nodes
    if not nodes:
        return [Violation("empty", 0)]
    if nodes[0].kind is not NodeKind.ORIGIN_DEPOT:
        out.append(Violation("origin", 0))
    if nodes[-1].kind is not NodeKind.DESTINATION_DEPOT:
        out.append(Violation("destination", len(nodes) - 1))

    pos = route.position
    if len(pos) != len(nodes):
        seen: set[int] = set()
        for k, node in enumerate(nodes):
            if node.id in seen:
                out.append(Violation("duplicate", k))
            seen.add(node.id)

    for k, node in enumerate(nodes):
        if node.window_open > node.window_close:
            out.append(Violation("window", k))
        if node.service < 0:
            out.append(Violation("service", k))
        if k < len(route.leg_travel) and route.leg_travel[k] < 0:
            out.append(Violation("travel", k))
        sign = node.load_delta
        if node.kind is NodeKind.PICKUP:
            if sign <= 0:
                out.append(Violation("load_sign", k))
            other = pos.get(node.partner)
            if other is None:
                out.append(Violation("unpaired", k))
                continue
            partner = nodes[other]
            if partner.kind is not NodeKind.DROPOFF or partner.load_delta != -sign:
                out.append(Violation("partner", k))
            if other < k:
                out.append(Violation("precedence", other))
            if node.max_ride is None:
                out.append(Violation("max_ride", k))
            direct = route.direct_travel.get(node.id)
            if direct is None:
                out.append(Violation("direct_travel", k))
            elif other > k and direct > sum(route.leg_travel[k:other]) + EPS:
                out.append(Violation("triangle", k))
        elif node.kind is NodeKind.DROPOFF:
            if sign >= 0:
                out.append(Violation("load_sign", k))
            if pos.get(node.partner) is None:
                out.append(Violation("unpaired", k))
        elif sign != 0:
            out.append(Violation("load_sign", k))

    load = 0
    for k, node in enumerate(nodes):
        if node.kind is NodeKind.STATION and load != 0:
            out.append(Violation("onboard_at_station", k))
        load += node.load_delta
        if load < 0:
            if not any(v.rule == "precedence" for v in out):
                out.append(Violation("negative_load", k))
        elif load > route.capacity:
            out.append(Violation("capacity", k))
    if load != 0:
        out.append(Violation("final_load", len(nodes) - 1))
    return out


def excess_ride_time(route: RouteSequence, starts: Sequence[float]) -> float:
    """Total excess ride time of ``starts`` over all requests."""
    total = 0.0
    for p, d in route.requests:
        pickup = route.nodes[p]
        total += starts[d] - starts[p] - pickup.service - route.direct_travel[pickup.id]
    return float(total)


def check_schedule(
    route: RouteSequence, starts: Sequence[float], tol: float = EPS
) -> list[Violation]:
    """Check service start times against the raw route data.

    Covers precedence of consecutive start times (travel plus service),
    maximum ride times and time windows. Independent of preprocessing and of
    any scheduler bookkeeping.
    """
    out: list[Violation] = []
    nodes = route.nodes
    for k, node in enumerate(nodes):
        t = starts[k]
        if t < node.window_open - tol:
            out.append(Violation("window_open", k, node.window_open - t))
        if t > node.window_close + tol:
            out.append(Violation("window_close", k, t - node.window_close))
        if k + 1 < len(nodes):
            gap = starts[k + 1] - t - node.service - route.leg_travel[k]
            if gap < -tol:
                out.append(Violation("sequence", k, -gap))
    for p, d in route.requests:
        pickup = nodes[p]
        ride = starts[d] - starts[p] - pickup.service
        if ride > pickup.max_ride + tol:
            out.append(Violation("ride_time", d, ride - pickup.max_ride))
    return out
