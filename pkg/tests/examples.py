"""Hand-built routes shared by several test modules."""

from ridesched.model import route_from_arrays

WIDE = 1000.0

# six-node route: depot, P1, P2, D1, D2, depot; P2 opens at 40
WORKED_WAITS = [19.0, 0.0, 0.0, 0.0, 0.0, 0.0]
WORKED_STARTS = [19.0, 29.0, 40.0, 51.0, 62.0, 73.0]
WORKED_EXCESS = 2.0


def worked_example():
    return route_from_arrays(
        loads=[0, 1, 1, -1, -1, 0],
        services=[0, 1, 1, 1, 1, 0],
        opens=[0, 0, 40, 0, 0, 0],
        closes=[WIDE] * 6,
        legs=[10] * 5,
        pairs=[(1, 3), (2, 4)],
        direct=[20, 20],
        max_rides=[30, 30],
    )


def four_nodes(services=(1, 1, 1, 1), opens=(0, 0, 0, 0), closes=(WIDE,) * 4):
    """depot, P1, D1, depot with 10-unit legs."""
    return route_from_arrays(
        loads=[0, 1, -1, 0],
        services=list(services),
        opens=list(opens),
        closes=list(closes),
        legs=[10, 10, 10],
        pairs=[(1, 2)],
        direct=[10],
        max_rides=[100],
    )


def taxi(pairs=2, leg=10.0, service=1.0):
    """Requests served back to back on direct legs."""
    m = 2 * pairs + 2
    loads = [0] + [1, -1] * pairs + [0]
    return route_from_arrays(
        loads=loads,
        services=[0] + [service] * (m - 2) + [0],
        opens=[0] * m,
        closes=[WIDE] * m,
        legs=[leg] * (m - 1),
        pairs=[(2 * k + 1, 2 * k + 2) for k in range(pairs)],
        direct=[leg] * pairs,
        max_rides=[3 * leg] * pairs,
    )


def recourse_example():
    """Four pickups then four dropoffs; the last request has a tight ride limit.

    Without recourse the sweep covers the shortage at the pinned dropoff by
    waiting while the tight request is on board and then runs out of ride
    time; recourse moves that waiting behind the early-closing pickup.
    """
    m = 10
    opens, closes = [0.0] * m, [1e4] * m
    closes[3] = 32.0
    opens[7] = closes[7] = 86.0
    opens[8] = 107.0
    return route_from_arrays(
        loads=[0, 1, 1, 1, 1, -1, -1, -1, -1, 0],
        services=[0] + [1] * 8 + [0],
        opens=opens,
        closes=closes,
        legs=[10] * 9,
        pairs=[(1, 5), (2, 6), (3, 7), (4, 8)],
        direct=[10] * 4,
        max_rides=[143, 143, 143, 58],
    )


RECOURSE_WAITS = [0, 0, 0, 0, 10, 0, 0, 0, 10, 0]
RECOURSE_STARTS = [0, 10, 21, 32, 53, 64, 75, 86, 107, 118]
