"""Schedule the six-stop example by hand-built arrays and compare with the LP."""

from ridesched import preprocess, schedule_route, solve_route
from ridesched.baseline import eight_step
from ridesched.model import route_from_arrays

# depot, P1, P2, D1, D2, depot; P2 cannot be served before t = 40
route = route_from_arrays(
    loads=[0, 1, 1, -1, -1, 0],
    services=[0, 1, 1, 1, 1, 0],
    opens=[0, 0, 40, 0, 0, 0],
    closes=[1000] * 6,
    legs=[10] * 5,
    pairs=[(1, 3), (2, 4)],
    direct=[20, 20],
    max_rides=[30, 30],
)

pre = preprocess(route)
print("earliest starts ", pre.et.tolist())
print("min cum. waiting", pre.delta.tolist())
print("requests aboard ", pre.weight.tolist())

s = schedule_route(route, pre)
print("\nscheduler: waits", s.waits.tolist(), "starts", s.starts.tolist(), "excess", s.excess)

# the 19 units of waiting go to the depot, where nobody is on board yet
lp = solve_route(route)
print("LP optimum      :", round(lp.excess, 9))
print("eight-step      :", eight_step(route).excess)
