import dataclasses
from collections import Counter

import pytest

from ridesched.model import NodeKind, validate_structure
from ridesched.preprocess import cumulative_load
from ridesched.routegen import GenConfig, GenerationExhausted, generate, synthesize_instance

DARP = synthesize_instance("pr01", 24, 3, seed=1)
EADARP = synthesize_instance("e1", 16, 2, seed=1, stations=3, battery=(14.85, 0.4, 14.85, 0.055))


def _ids(routes):
    return [tuple(n.id for n in r.nodes) for r in routes]


def test_deterministic():
    cfg = GenConfig(seed=42, routes_per_instance=200)
    assert _ids(generate(DARP, cfg)) == _ids(generate(DARP, cfg))
    other = dataclasses.replace(cfg, seed=43)
    assert _ids(generate(DARP, cfg)) != _ids(generate(DARP, other))


def test_four_node_routes_are_single_requests():
    for route in generate(DARP, GenConfig(seed=1, routes_per_instance=100, size_range=(4, 4))):
        kinds = [n.kind for n in route.nodes]
        assert kinds == [NodeKind.ORIGIN_DEPOT, NodeKind.PICKUP, NodeKind.DROPOFF, NodeKind.DESTINATION_DEPOT]


def test_no_stations_without_density():
    cfg = GenConfig(seed=2, routes_per_instance=200, station_density=0.0)
    for inst in (DARP, EADARP):
        assert all(not r.stations for r in generate(inst, cfg))


@pytest.mark.parametrize("bias", ["random", "greedy-nearest"])
def test_every_route_is_structurally_valid(bias):
    cfg = GenConfig(seed=3, routes_per_instance=300, station_density=0.5, bias=bias, min_stations=1)
    for route in generate(EADARP, cfg):
        assert validate_structure(route) == []
        assert len(route.stations) >= 1
        load = cumulative_load(route)
        assert all(load[s] == 0 for s in route.stations)


def test_sizes_cover_the_range():
    cfg = GenConfig(seed=4, routes_per_instance=3000, size_range=(4, 20))
    sizes = Counter(len(r) for r in generate(DARP, cfg))
    assert set(sizes) == set(range(4, 21, 2))


def test_unreachable_size_range():
    with pytest.raises(GenerationExhausted):
        next(generate(DARP, GenConfig(size_range=(60, 80))))


def test_bad_config():
    with pytest.raises(ValueError):
        GenConfig(size_range=(10, 4))
    with pytest.raises(ValueError):
        GenConfig(station_density=1.5)
    with pytest.raises(ValueError):
        GenConfig(bias="nearest")
