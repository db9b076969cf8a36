"""Benchmark instances, route corpora and report files.

Instance text layout (whitespace separated, blank lines ignored)::

    m n T Q L                       vehicles, requests, route duration, capacity, max ride
    id x y service load open close  2n + 2 lines: depot, pickups 1..n, dropoffs n+1..2n, end depot
    Q r B_init beta                 e-ADARP only: battery capacity, end ratio, initial level, discharge
    id x y alpha                    e-ADARP only: one line per charging station, until end of file

Corpus records are one route per line, ``instance_id;vehicle_id;id,id,...``.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .battery import BatteryParams
from .model import Node, NodeKind, RouteSequence

REPORT_HEADER = [
    "name",
    "n_routes",
    "size_min",
    "size_max",
    "alg",
    "n_infeasible",
    "n_deviating",
    "avg_dev_pct",
    "avg_cpu_ms",
]


class IngestError(Exception):
    pass


class MalformedLine(IngestError):
    def __init__(self, line_no: int, reason: str = ""):
        super().__init__(f"line {line_no}: {reason or 'malformed'}")
        self.line_no = line_no


class CountMismatch(IngestError):
    def __init__(self, expected: int, found: int):
        super().__init__(f"expected {expected} node lines, found {found}")
        self.expected = expected
        self.found = found


class MalformedRecord(IngestError):
    def __init__(self, record_no: int, reason: str = ""):
        super().__init__(f"record {record_no}: {reason or 'malformed'}")
        self.record_no = record_no


@dataclass(frozen=True)
class InstanceNode:
    id: int
    x: float
    y: float
    service: float
    load: int
    open: float
    close: float


@dataclass(frozen=True)
class Station:
    id: int
    x: float
    y: float
    alpha: float


@dataclass(frozen=True)
class BatteryBlock:
    capacity: float
    end_ratio: float
    init: float
    discharge: float
    stations: tuple[Station, ...] = ()

    def params(self) -> BatteryParams:
        return BatteryParams(
            capacity=self.capacity,
            init=self.init,
            end_ratio=self.end_ratio,
            discharge=self.discharge,
            charge_rate={s.id: s.alpha for s in self.stations},
        )


@dataclass(frozen=True)
class Instance:
    vehicles: int
    requests: int
    max_route_duration: float
    capacity: int
    default_max_ride: float
    nodes: tuple[InstanceNode, ...]
    battery: BatteryBlock | None = None
    name: str = ""
    _by_id: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {n.id: n for n in self.nodes}
        if self.battery is not None:
            index.update({s.id: s for s in self.battery.stations})
        object.__setattr__(self, "_by_id", index)

    @property
    def end_depot(self) -> int:
        return self.nodes[-1].id

    @property
    def horizon(self) -> tuple[float, float]:
        return self.nodes[0].open, self.nodes[0].close

    def node(self, node_id: int):
        return self._by_id[node_id]

    def travel(self, a: int, b: int) -> float:
        p, q = self._by_id[a], self._by_id[b]
        return math.hypot(p.x - q.x, p.y - q.y)

    def partner(self, node_id: int) -> int | None:
        n = self.requests
        if 1 <= node_id <= n:
            return node_id + n
        if n < node_id <= 2 * n:
            return node_id - n
        return None

    def kind(self, node_id: int) -> NodeKind:
        n = self.requests
        if node_id == self.nodes[0].id:
            return NodeKind.ORIGIN_DEPOT
        if node_id == self.end_depot:
            return NodeKind.DESTINATION_DEPOT
        if 1 <= node_id <= n:
            return NodeKind.PICKUP
        if n < node_id <= 2 * n:
            return NodeKind.DROPOFF
        if self.battery is not None and any(s.id == node_id for s in self.battery.stations):
            return NodeKind.STATION
        raise KeyError(node_id)


def _fields(line: str, line_no: int, types: Sequence[type]) -> list:
    parts = line.split()
    if len(parts) != len(types):
        raise MalformedLine(line_no, f"expected {len(types)} fields, got {len(parts)}")
    out = []
    for text, kind in zip(parts, types):
        try:
            value = float(text)
        except ValueError:
            raise MalformedLine(line_no, f"not a number: {text!r}") from None
        if not math.isfinite(value):
            raise MalformedLine(line_no, f"not finite: {text!r}")
        if kind is int:
            if not value.is_integer():
                raise MalformedLine(line_no, f"not an integer: {text!r}")
            value = int(value)
        out.append(value)
    return out


def parse_instance(text: str | Iterable[str], format: str = "darp", name: str = "") -> Instance:
    """Parse an instance from text; ``format`` is ``darp`` or ``eadarp``."""
    if format not in ("darp", "eadarp"):
        raise ValueError(f"unknown format {format!r}")
    lines = text.splitlines() if isinstance(text, str) else list(text)
    numbered = [(k + 1, ln) for k, ln in enumerate(lines) if ln.strip()]
    if not numbered:
        raise MalformedLine(1, "empty instance")
    line_no, header = numbered[0]
    m, n, duration, cap, ride = _fields(header, line_no, [int, int, float, int, float])
    if m < 1 or n < 0 or cap < 1:
        raise MalformedLine(line_no, "bad header values")
    count = 2 * n + 2
    body = numbered[1:]
    node_lines = body[:count]
    if len(node_lines) < count:
        raise CountMismatch(count, len(node_lines))
    nodes = []
    for k, (line_no, line) in enumerate(node_lines):
        nid, x, y, s, load, a, b = _fields(line, line_no, [int, float, float, float, int, float, float])
        if nid != k:
            raise MalformedLine(line_no, f"expected node id {k}, got {nid}")
        if a > b or s < 0:
            raise MalformedLine(line_no, "bad window or service")
        if 1 <= k <= n and load <= 0:
            raise MalformedLine(line_no, "pickup load must be positive")
        nodes.append(InstanceNode(nid, x, y, s, load, a, b))
    for k in range(1, n + 1):
        if nodes[k + n].load != -nodes[k].load:
            raise MalformedLine(node_lines[k + n][0], "dropoff load must mirror its pickup")

    rest = body[count:]
    battery = None
    if format == "darp":
        if rest:
            raise CountMismatch(count, count + len(rest))
    else:
        if not rest:
            raise MalformedLine(len(lines) + 1, "missing battery line")
        line_no, line = rest[0]
        q, r, b0, beta = _fields(line, line_no, [float] * 4)
        if not (0.0 <= r <= 1.0 and 0.0 <= b0 <= q and beta > 0):
            raise MalformedLine(line_no, "bad battery values")
        stations = []
        seen = {nd.id for nd in nodes}
        for line_no, line in rest[1:]:
            sid, x, y, alpha = _fields(line, line_no, [int, float, float, float])
            if sid in seen or alpha <= 0:
                raise MalformedLine(line_no, "bad station")
            seen.add(sid)
            stations.append(Station(sid, x, y, alpha))
        battery = BatteryBlock(q, r, b0, beta, tuple(stations))
    return Instance(m, n, duration, cap, ride, tuple(nodes), battery, name)


def load_instance(path: str | Path, format: str | None = None) -> Instance:
    path = Path(path)
    text = path.read_text()
    if format is None:
        format = "eadarp" if path.suffix == ".eadarp" else "darp"
    return parse_instance(text, format, name=path.stem)


def _num(x: float) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 1e15 else repr(x)


def render_instance(inst: Instance) -> str:
    out = [
        " ".join(
            [
                str(inst.vehicles),
                str(inst.requests),
                _num(inst.max_route_duration),
                str(inst.capacity),
                _num(inst.default_max_ride),
            ]
        )
    ]
    for nd in inst.nodes:
        out.append(
            " ".join(
                [str(nd.id), _num(nd.x), _num(nd.y), _num(nd.service), str(nd.load)]
                + [_num(nd.open), _num(nd.close)]
            )
        )
    if inst.battery is not None:
        b = inst.battery
        out.append(" ".join(_num(v) for v in (b.capacity, b.end_ratio, b.init, b.discharge)))
        for s in b.stations:
            out.append(" ".join([str(s.id), _num(s.x), _num(s.y), _num(s.alpha)]))
    return "\n".join(out) + "\n"


def derive_dropoff_windows(inst: Instance) -> Instance:
    """Fill in the missing end of every request's time window.

    A window is missing when it spans the whole planning horizon. Requests
    with both windows set, or neither, are left alone.
    """
    lo, hi = inst.horizon
    n, u = inst.requests, inst.default_max_ride
    nodes = list(inst.nodes)

    def free(nd: InstanceNode) -> bool:
        return nd.open <= lo and nd.close >= hi

    for k in range(1, n + 1):
        p, d = nodes[k], nodes[k + n]
        t = inst.travel(p.id, d.id)
        if not free(p) and free(d):
            a = max(d.open, p.open + p.service + t)
            b = min(d.close, p.close + p.service + u)
            nodes[k + n] = dataclasses.replace(d, open=a, close=b)
        elif free(p) and not free(d):
            a = max(p.open, d.open - u - p.service)
            b = min(p.close, d.close - t - p.service)
            nodes[k] = dataclasses.replace(p, open=a, close=b)
    return dataclasses.replace(inst, nodes=tuple(nodes))


def route_from_ids(
    inst: Instance, ids: Sequence[int], instance_id: str = "", vehicle_id: int = 0
) -> RouteSequence:
    """Build a route over instance nodes; travel times come from coordinates."""
    nodes = []
    last = len(ids) - 1
    for k, nid in enumerate(ids):
        kind = inst.kind(nid)
        if kind is NodeKind.DESTINATION_DEPOT and k != last:
            raise KeyError(nid)
        if k == last and nid == inst.nodes[0].id:
            kind = NodeKind.DESTINATION_DEPOT
        if kind is NodeKind.STATION:
            lo, hi = inst.horizon
            nodes.append(Node(nid, kind, 0, 0.0, lo, hi))
            continue
        nd = inst.node(nid)
        nodes.append(
            Node(
                id=nid,
                kind=kind,
                load_delta=nd.load,
                service=nd.service,
                window_open=nd.open,
                window_close=nd.close,
                max_ride=inst.default_max_ride if kind is NodeKind.PICKUP else None,
                partner=inst.partner(nid),
            )
        )
    legs = [inst.travel(a, b) for a, b in zip(ids[:-1], ids[1:])]
    direct = {
        nid: inst.travel(nid, inst.partner(nid))
        for nid in ids
        if inst.partner(nid) is not None and nid <= inst.requests
    }
    return RouteSequence(
        nodes=tuple(nodes),
        leg_travel=tuple(legs),
        direct_travel=direct,
        capacity=inst.capacity,
        instance_id=instance_id or inst.name,
        vehicle_id=vehicle_id,
    )


@dataclass(frozen=True)
class CorpusRecord:
    instance_id: str
    vehicle_id: int
    node_ids: tuple[int, ...]

    def render(self) -> str:
        return f"{self.instance_id};{self.vehicle_id};{','.join(map(str, self.node_ids))}"

    @classmethod
    def parse(cls, line: str, record_no: int = 1) -> "CorpusRecord":
        parts = line.rstrip("\r\n").split(";")
        if len(parts) != 3 or not parts[0] or ";" in parts[0]:
            raise MalformedRecord(record_no, "expected instance;vehicle;ids")
        try:
            vehicle = int(parts[1])
            ids = tuple(int(t) for t in parts[2].split(","))
        except ValueError:
            raise MalformedRecord(record_no, "non-integer field") from None
        if len(ids) < 2:
            raise MalformedRecord(record_no, "route needs at least two nodes")
        return cls(parts[0], vehicle, ids)

    @classmethod
    def of(cls, route: RouteSequence) -> "CorpusRecord":
        return cls(route.instance_id, route.vehicle_id, tuple(n.id for n in route.nodes))


def read_records(path: str | Path) -> Iterator[CorpusRecord]:
    with open(path) as fh:
        for k, line in enumerate(fh, start=1):
            if not line.strip():
                raise MalformedRecord(k, "blank line")
            yield CorpusRecord.parse(line, k)


def read_corpus(path: str | Path, instances: Mapping[str, Instance]) -> Iterator[RouteSequence]:
    """Routes of a corpus file, rebuilt against their instances."""
    for k, rec in enumerate(read_records(path), start=1):
        inst = instances.get(rec.instance_id)
        if inst is None:
            raise MalformedRecord(k, f"unknown instance {rec.instance_id!r}")
        try:
            yield route_from_ids(inst, rec.node_ids, rec.instance_id, rec.vehicle_id)
        except KeyError as exc:
            raise MalformedRecord(k, f"unknown node {exc.args[0]}") from None


def write_corpus(path: str | Path, routes: Iterable[RouteSequence | CorpusRecord]) -> int:
    count = 0
    with open(path, "w", newline="\n") as fh:
        for item in routes:
            rec = item if isinstance(item, CorpusRecord) else CorpusRecord.of(item)
            fh.write(rec.render() + "\n")
            count += 1
    return count


@dataclass
class ReportRow:
    name: str
    n_routes: int
    size_min: int
    size_max: int
    alg: str
    n_infeasible: int
    n_deviating: int
    avg_dev_pct: float
    avg_cpu_ms: float

    def cells(self) -> list[str]:
        return [
            self.name,
            str(self.n_routes),
            str(self.size_min),
            str(self.size_max),
            self.alg,
            str(self.n_infeasible),
            str(self.n_deviating),
            f"{self.avg_dev_pct:.4f}",
            f"{self.avg_cpu_ms:.4f}",
        ]


def render_report(rows: Iterable[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for row in rows:
        writer.writerow(row.cells())
    return buf.getvalue()


def write_report(path: str | Path, rows: Iterable[ReportRow]) -> None:
    Path(path).write_text(render_report(rows))
