"""Plan charging on generated e-ADARP routes and check each plan against the battery LP."""

from collections import Counter

from ridesched.battery import check_battery_constraints, schedule_with_battery
from ridesched.oracle import audit, solve_route
from ridesched.routegen import GenConfig, generate, synthesize_instance

inst = synthesize_instance("u3-24-0.7", 24, 3, seed=1, stations=4, battery=(50.0, 0.7, 50.0, 0.25))
params = inst.battery.params()
cfg = GenConfig(seed=3, routes_per_instance=300, station_density=0.5, min_stations=1)

outcomes = Counter()
shown = False
for route in generate(inst, cfg):
    sched, plan = schedule_with_battery(route, params)
    outcomes[audit(route, sched, solve_route(route, params)).outcome.value] += 1
    if plan is not None and plan.feasible and plan.charges and not shown:
        shown = True
        print("route", [n.id for n in route.nodes])
        print("charging minutes", {route.nodes[i].id: round(e, 2) for i, e in plan.charges.items()})
        print("battery levels  ", [round(float(b), 2) for b in plan.levels])
        print("checker         ", check_battery_constraints(route, sched, plan, params))

print("\naudit over", sum(outcomes.values()), "routes:", dict(outcomes))
