"""Minimum excess ride time scheduling of fixed dial-a-ride routes."""

from .battery import (
    BatteryParams,
    BatteryPlan,
    check_battery_constraints,
    plan_charging,
    schedule_with_battery,
    split_at_stations,
)
from .baseline import eight_step
from .model import (
    EPS,
    InfeasibilityReason,
    Node,
    NodeKind,
    RouteSequence,
    Schedule,
    check_schedule,
    excess_ride_time,
    route_from_arrays,
    validate_structure,
)
from .oracle import Outcome, audit, build_lp1, build_lp1_battery, build_lp2, solve_route
from .preprocess import PreprocessedRoute, preprocess
from .scheduler import schedule_route

__all__ = [
    "EPS",
    "BatteryParams",
    "BatteryPlan",
    "InfeasibilityReason",
    "Node",
    "NodeKind",
    "Outcome",
    "PreprocessedRoute",
    "RouteSequence",
    "Schedule",
    "audit",
    "build_lp1",
    "build_lp1_battery",
    "build_lp2",
    "check_battery_constraints",
    "check_schedule",
    "eight_step",
    "excess_ride_time",
    "plan_charging",
    "preprocess",
    "route_from_arrays",
    "schedule_route",
    "schedule_with_battery",
    "solve_route",
    "split_at_stations",
    "validate_structure",
]
