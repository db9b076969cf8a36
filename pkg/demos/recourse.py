"""A route where greedy waiting assignment paints itself into a corner.

The pinned stop at position 7 forces waiting, and the cheapest place to put
it lies while the last passenger is on board. That passenger's ride limit is
tight, so the sweep fails at position 8 unless it revisits the decision.
"""

from ridesched import schedule_route, solve_route
from ridesched.model import check_schedule, route_from_arrays

opens, closes = [0.0] * 10, [1e4] * 10
closes[3] = 32.0
opens[7] = closes[7] = 86.0
opens[8] = 107.0
route = route_from_arrays(
    loads=[0, 1, 1, 1, 1, -1, -1, -1, -1, 0],
    services=[0] + [1] * 8 + [0],
    opens=opens,
    closes=closes,
    legs=[10] * 9,
    pairs=[(1, 5), (2, 6), (3, 7), (4, 8)],
    direct=[10] * 4,
    max_rides=[143, 143, 143, 58],
)

greedy = schedule_route(route, use_recourse=False)
print("without recourse:", greedy.verdict, "waits", greedy.waits.tolist())

s = schedule_route(route)
print("with recourse   :", s.verdict, "after", s.restarts, "restart(s)")
print("  waits ", s.waits.tolist())
print("  starts", s.starts.tolist())
print("  violations", check_schedule(route, s.starts))
print("excess", s.excess, "vs LP optimum", round(solve_route(route).excess, 6))
