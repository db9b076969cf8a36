"""Route corpora for benchmarking, and synthetic benchmark-style instances.

Routes are capacity and precedence feasible by construction but time windows
are not enforced, so a corpus mixes feasible and infeasible routes.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .ingest import (
    BatteryBlock,
    Instance,
    InstanceNode,
    Station,
    derive_dropoff_windows,
    route_from_ids,
)
from .model import RouteSequence, validate_structure


class GenerationExhausted(Exception):
    pass


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    routes_per_instance: int = 1000
    size_range: tuple[int, int] = (4, 40)
    station_density: float = 0.0
    bias: str = "greedy-nearest"
    min_stations: int = 0
    retries: int = 100

    def __post_init__(self):
        lo, hi = self.size_range
        if lo < 2 or hi < lo:
            raise ValueError(f"bad size range {self.size_range}")
        if not 0.0 <= self.station_density <= 1.0:
            raise ValueError("station density must lie in [0, 1]")
        if self.bias not in ("random", "greedy-nearest"):
            raise ValueError(f"unknown bias {self.bias!r}")


def _rng(inst: Instance, seed: int) -> np.random.Generator:
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, zlib.crc32(inst.name.encode())])


def _request_range(inst: Instance, cfg: GenConfig) -> tuple[int, int]:
    lo, hi = cfg.size_range
    k_lo = max(1, -(-(lo - 2 - 2 * cfg.min_stations) // 2))
    if inst.battery is None or cfg.station_density == 0.0:
        k_lo = max(1, -(-(lo - 2) // 2))
    k_hi = min(inst.requests, (hi - 2 - cfg.min_stations) // 2)
    if k_lo > k_hi:
        raise GenerationExhausted(
            f"no route of {lo}..{hi} nodes fits {inst.requests} requests"
        )
    return k_lo, k_hi


def _pick_requests(inst: Instance, k: int, rng, bias: str) -> list[int]:
    """Candidate requests; the greedy builder may serve only ``k`` of them."""
    n = inst.requests
    if bias == "random":
        return sorted(rng.choice(np.arange(1, n + 1), size=k, replace=False).tolist())
    # requests close in time to a random anchor, with a little shuffle
    pool = min(n, 2 * k)
    ref = np.array([_ref_time(inst, r) for r in range(1, n + 1)])
    order = np.argsort(ref + rng.normal(0.0, 20.0, n), kind="stable")
    start = int(rng.integers(0, n - pool + 1))
    return sorted((order[start : start + pool] + 1).tolist())


def _ref_time(inst: Instance, r: int) -> float:
    """Rough pickup time of request ``r`` from whichever end carries the window."""
    p, d = inst.node(r), inst.node(r + inst.requests)
    if p.close - p.open <= d.close - d.open:
        return p.open
    return d.open - inst.default_max_ride


def _due(inst: Instance, v: int, onboard: dict[int, float]) -> float:
    """Latest start at stop ``v`` given the pickup times of passengers on board."""
    n = inst.requests
    due = inst.node(v).close
    if v > n and v - n in onboard:
        pickup = inst.node(v - n)
        due = min(due, onboard[v - n] + pickup.service + inst.default_max_ride)
    return due


def _keeps_promises(inst: Instance, v: int, t: float, onboard: dict[int, float]) -> bool:
    """Whether picking up ``v`` at ``t`` still lets every passenger be dropped in time."""
    n = inst.requests
    after = t + inst.node(v).service
    riders = dict(onboard)
    riders[v] = t
    return all(after + inst.travel(v, r + n) <= _due(inst, r + n, riders) for r in riders)


def _sequence(inst: Instance, reqs: list[int], k: int, rng, bias: str) -> list[int]:
    """Order up to ``k`` of ``reqs`` into a capacity and precedence feasible stop list.

    The greedy builder follows a simulated clock and serves the stop with the
    earliest due time. It skips pickups that would make someone on board
    late, and gives up on pickups it can no longer reach in time.
    """
    n = inst.requests
    waiting = set(reqs)
    onboard: dict[int, float] = {}  # request -> pickup start time
    load = 0
    served = 0
    here = inst.nodes[0].id
    clock = inst.nodes[0].open
    seq: list[int] = []
    while (waiting and served < k) or onboard:
        options = [r + n for r in sorted(onboard)]
        if served < k:
            options += [r for r in sorted(waiting) if load + inst.node(r).load <= inst.capacity]
        if not options:
            break
        leave = clock + inst.node(here).service
        starts = [max(leave + inst.travel(here, v), inst.node(v).open) for v in options]
        if bias == "random":
            pick = int(rng.integers(len(options)))
        else:
            scores = []
            for v, t in zip(options, starts):
                due = _due(inst, v, onboard)
                if v <= n and t > due:
                    waiting.discard(v)
                    scores.append(np.inf)
                elif v <= n and not _keeps_promises(inst, v, t, onboard):
                    scores.append(np.inf)
                else:
                    scores.append(min(due, t + 60.0) + rng.exponential(5.0))
            if not np.isfinite(min(scores)):
                if not onboard:
                    # every remaining pickup is out of reach from here
                    break
                scores = [_due(inst, v, onboard) if v > n else np.inf for v in options]
            pick = int(np.argmin(scores))
        nxt = options[pick]
        seq.append(nxt)
        if nxt <= n:
            waiting.discard(nxt)
            onboard[nxt] = starts[pick]
            served += 1
        else:
            del onboard[nxt - n]
        load += inst.node(nxt).load
        here, clock = nxt, starts[pick]
    return seq


def _insert_stations(inst: Instance, seq: list[int], room: int, rng, density: float) -> list[int]:
    if inst.battery is None or not inst.battery.stations or room <= 0:
        return seq
    slots = [0]  # insert before seq[k]; slot 0 is right after the depot
    load = 0
    for k, v in enumerate(seq):
        load += inst.node(v).load
        if load == 0:
            slots.append(k + 1)
    chosen = [s for s in slots if rng.random() < density][:room]
    if not chosen:
        return seq
    pool = list(inst.battery.stations)
    picks = rng.choice(len(pool), size=min(len(chosen), len(pool)), replace=False)
    pending = dict(zip(chosen, picks))
    out = []
    for k in range(len(seq) + 1):
        if k in pending:
            out.append(pool[int(pending[k])].id)
        if k < len(seq):
            out.append(seq[k])
    return out


def _station_count(inst: Instance, ids) -> int:
    if inst.battery is None:
        return 0
    sid = {s.id for s in inst.battery.stations}
    return sum(1 for v in ids if v in sid)


def generate(inst: Instance, cfg: GenConfig) -> Iterator[RouteSequence]:
    """Deterministic stream of ``cfg.routes_per_instance`` routes for ``inst``."""
    rng = _rng(inst, cfg.seed)
    k_lo, k_hi = _request_range(inst, cfg)
    lo, hi = cfg.size_range
    depot, end = inst.nodes[0].id, inst.end_depot
    for count in range(cfg.routes_per_instance):
        for _ in range(cfg.retries):
            k = int(rng.integers(k_lo, k_hi + 1))
            seq = _sequence(inst, _pick_requests(inst, k, rng, cfg.bias), k, rng, cfg.bias)
            seq = _insert_stations(inst, seq, hi - 2 - len(seq), rng, cfg.station_density)
            ids = [depot] + seq + [end]
            if not lo <= len(ids) <= hi or _station_count(inst, ids) < cfg.min_stations:
                continue
            route = route_from_ids(inst, ids, inst.name, count % inst.vehicles)
            if validate_structure(route):
                continue
            yield route
            break
        else:
            raise GenerationExhausted(
                f"{inst.name}: no admissible route after {cfg.retries} attempts"
            )


def synthesize_instance(
    name: str,
    requests: int,
    vehicles: int,
    seed: int,
    *,
    capacity: int = 6,
    max_ride: float = 90.0,
    route_duration: float = 480.0,
    horizon: float = 1440.0,
    window: float = 15.0,
    stations: int = 0,
    battery: tuple[float, float, float, float] | None = None,
) -> Instance:
    """Random instance in the style of the classical benchmark files.

    Coordinates are uniform on [-10, 10]^2. Half of the requests carry a
    pickup window and half a dropoff window, each ``window`` long; the other
    end is derived from the maximum ride time. ``battery`` is
    ``(Q, r, B_init, beta)`` and turns on the e-ADARP block.
    """
    rng = np.random.default_rng([seed, zlib.crc32(name.encode())])
    n = requests
    xy = rng.uniform(-10.0, 10.0, size=(2 * n + 1, 2))
    xy[0] = rng.uniform(-1.0, 1.0, 2)
    service = rng.integers(3, 11, size=n).astype(float)
    load = np.where(rng.random(n) < 0.85, 1, rng.integers(2, capacity + 1, size=n))
    nodes = [InstanceNode(0, float(xy[0, 0]), float(xy[0, 1]), 0.0, 0, 0.0, horizon)]
    drops = []
    for r in range(1, n + 1):
        open_p = (0.0, horizon)
        open_d = (0.0, horizon)
        start = float(rng.uniform(60.0, horizon - 120.0))
        if r <= n // 2:
            open_p = (start, start + window)
        else:
            open_d = (start + 60.0, start + 60.0 + window)
        nodes.append(
            InstanceNode(r, float(xy[r, 0]), float(xy[r, 1]), float(service[r - 1]), int(load[r - 1]), *open_p)
        )
        drops.append(
            InstanceNode(
                r + n, float(xy[r + n, 0]), float(xy[r + n, 1]), float(service[r - 1]), -int(load[r - 1]), *open_d
            )
        )
    nodes += drops
    nodes.append(InstanceNode(2 * n + 1, float(xy[0, 0]), float(xy[0, 1]), 0.0, 0, 0.0, horizon))
    block = None
    if battery is not None:
        q, r, b0, beta = battery
        spots = rng.uniform(-10.0, 10.0, size=(stations, 2))
        alphas = rng.uniform(0.5, 1.5, size=stations) * q / 60.0
        block = BatteryBlock(
            q,
            r,
            b0,
            beta,
            tuple(
                Station(2 * n + 2 + k, float(spots[k, 0]), float(spots[k, 1]), float(alphas[k]))
                for k in range(stations)
            ),
        )
    inst = Instance(vehicles, n, route_duration, capacity, max_ride, tuple(nodes), block, name)
    return derive_dropoff_windows(inst)
