"""Independent LP reference built directly on scipy's HiGHS, for tests only."""

import numpy as np
from scipy.optimize import linprog


def lp1_scipy(route, objective=None):
    """Solve the start-time LP with scipy; returns (status, value, x).

    ``objective`` is a coefficient vector over T; default is the excess ride time.
    status is 'optimal' or 'infeasible'.
    """
    m = len(route)
    nodes = route.nodes
    a_ub, b_ub = [], []
    for i in range(m - 1):
        row = np.zeros(m)
        row[i], row[i + 1] = 1.0, -1.0
        a_ub.append(row)
        b_ub.append(-(nodes[i].service + route.leg_travel[i]))
    c = np.zeros(m)
    const = 0.0
    for p, d in route.requests:
        row = np.zeros(m)
        row[d], row[p] = 1.0, -1.0
        a_ub.append(row)
        b_ub.append(nodes[p].max_ride + nodes[p].service)
        c[d] += 1.0
        c[p] -= 1.0
        const -= nodes[p].service + route.direct_travel[nodes[p].id]
    if objective is not None:
        c, const = np.asarray(objective, dtype=float), 0.0
    bounds = [(n.window_open, n.window_close) for n in nodes]
    res = linprog(c, A_ub=np.array(a_ub) if a_ub else None, b_ub=b_ub or None,
                  bounds=bounds, method="highs")
    if res.status == 0:
        return "optimal", float(res.fun + const), res.x
    if res.status == 2:
        return "infeasible", None, None
    raise AssertionError(f"unexpected scipy status {res.status}: {res.message}")
