"""Dense bounded-variable primal simplex with Bland's rule.

Meant as an auditable reference solver for the small scheduling LPs in this
package, not as a general purpose LP code. Every variable needs a finite
lower bound; rows are ``lo <= a @ x <= hi`` with either side possibly infinite.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

INF = float("inf")


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    """``min c @ x + offset`` subject to row ranges and variable bounds."""

    c: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    rows: list[dict[int, float]] = field(default_factory=list)
    row_lo: list[float] = field(default_factory=list)
    row_hi: list[float] = field(default_factory=list)
    offset: float = 0.0
    names: list[str] | None = None

    @classmethod
    def empty(cls, n: int, lower=0.0, upper=INF, names=None) -> "LinearProgram":
        return cls(
            c=np.zeros(n),
            lower=np.broadcast_to(np.asarray(lower, dtype=float), (n,)).copy(),
            upper=np.broadcast_to(np.asarray(upper, dtype=float), (n,)).copy(),
            names=names,
        )

    @property
    def n_vars(self) -> int:
        return len(self.c)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def add_constraint(self, coefs: dict[int, float], sense: str, rhs: float) -> None:
        if sense == "<=":
            self.add_range(coefs, -INF, rhs)
        elif sense == ">=":
            self.add_range(coefs, rhs, INF)
        elif sense == "=":
            self.add_range(coefs, rhs, rhs)
        else:
            raise ValueError(f"unknown sense {sense!r}")

    def add_range(self, coefs: dict[int, float], lo: float, hi: float) -> None:
        self.rows.append({int(j): float(a) for j, a in coefs.items() if a != 0.0})
        self.row_lo.append(float(lo))
        self.row_hi.append(float(hi))

    def matrix(self) -> np.ndarray:
        A = np.zeros((self.n_rows, self.n_vars))
        for i, row in enumerate(self.rows):
            for j, a in row.items():
                A[i, j] += a
        return A

    def residuals(self, x: np.ndarray) -> np.ndarray:
        """Per-row and per-bound violation amounts (zero when satisfied)."""
        act = self.matrix() @ x if self.rows else np.zeros(0)
        lo, hi = np.asarray(self.row_lo), np.asarray(self.row_hi)
        rows = np.maximum(np.maximum(lo - act, act - hi), 0.0)
        bounds = np.maximum(np.maximum(self.lower - x, x - self.upper), 0.0)
        return np.concatenate((rows, bounds))

    def value(self, x: np.ndarray) -> float:
        return float(self.c @ x + self.offset)


@dataclass
class LPResult:
    status: Status
    x: np.ndarray | None = None
    objective: float | None = None
    reduced_costs: np.ndarray | None = None
    at_upper: np.ndarray | None = None
    basic: np.ndarray | None = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    def __init__(self, T, xB, basis, lo, hi, at_upper, is_basic, tol, piv_tol):
        self.T = T
        self.xB = xB
        self.basis = basis
        self.lo = lo
        self.hi = hi
        self.at_upper = at_upper
        self.is_basic = is_basic
        self.tol = tol
        self.piv_tol = piv_tol
        self.iterations = 0

    def run(self, cost: np.ndarray, max_iter: int) -> Status:
        T, lo, hi = self.T, self.lo, self.hi
        d = cost - cost[self.basis] @ T
        movable = hi > lo
        while True:
            if self.iterations >= max_iter:
                raise RuntimeError("simplex iteration limit reached")
            nonbasic = ~self.is_basic
            up = nonbasic & ~self.at_upper & movable & (d < -self.tol)
            down = nonbasic & self.at_upper & (d > self.tol)
            eligible = np.flatnonzero(up | down)
            if eligible.size == 0:
                self.d = d
                return Status.OPTIMAL
            q = int(eligible[0])
            sign = 1.0 if up[q] else -1.0
            col = sign * T[:, q]

            basis = self.basis
            ratio = np.full(col.shape, INF)
            dec = col > self.piv_tol
            inc = col < -self.piv_tol
            ratio[dec] = (self.xB[dec] - lo[basis[dec]]) / col[dec]
            ratio[inc] = (hi[basis[inc]] - self.xB[inc]) / -col[inc]
            np.maximum(ratio, 0.0, out=ratio)
            step = ratio.min() if ratio.size else INF
            span = hi[q] - lo[q]
            if span <= step:
                # bound flip of the entering variable
                if span == INF:
                    self.d = d
                    return Status.UNBOUNDED
                self.xB -= span * col
                self.at_upper[q] = not self.at_upper[q]
                self.iterations += 1
                continue
            if step == INF:
                self.d = d
                return Status.UNBOUNDED
            ties = np.flatnonzero(ratio <= step + self.tol)
            r = int(ties[np.argmin(basis[ties])])
            leaving = int(basis[r])
            to_upper = bool(inc[r])

            self.xB -= step * col
            entering_value = lo[q] + step if sign > 0 else hi[q] - step
            self.xB[r] = entering_value
            self.is_basic[leaving] = False
            self.at_upper[leaving] = to_upper
            self.is_basic[q] = True
            self.at_upper[q] = False
            basis[r] = q

            T[r] /= T[r, q]
            pivot_col = T[:, q].copy()
            pivot_col[r] = 0.0
            T -= np.outer(pivot_col, T[r])
            d = d - d[q] * T[r]
            self.iterations += 1


def solve(
    lp: LinearProgram,
    tol: float = 1e-9,
    feas_tol: float = 1e-7,
    max_iter: int | None = None,
) -> LPResult:
    """Solve ``lp`` with a two-phase bounded simplex.

    Phase one minimises the sum of artificial variables; the problem is
    declared infeasible when that sum stays above ``feas_tol``. Entering and
    leaving variables follow Bland's smallest-index rule, so the pivot path is
    deterministic.
    """
    n = lp.n_vars
    lower = np.asarray(lp.lower, dtype=float)
    upper = np.asarray(lp.upper, dtype=float)
    if not np.all(np.isfinite(lower)):
        raise ValueError("every variable needs a finite lower bound")
    if np.any(upper < lower):
        return LPResult(Status.INFEASIBLE)

    A = lp.matrix()
    shift = A @ lower if lp.rows else np.zeros(0)
    lo = np.asarray(lp.row_lo, dtype=float) - shift
    hi = np.asarray(lp.row_hi, dtype=float) - shift
    keep = np.isfinite(lo) | np.isfinite(hi)
    if np.any(lo[keep] > hi[keep] + feas_tol):
        return LPResult(Status.INFEASIBLE)
    A, lo, hi = A[keep], lo[keep], hi[keep]
    m = A.shape[0]

    # each row becomes a @ y + sigma * s = rho with 0 <= s <= s_hi
    upper_side = np.isfinite(hi)
    sigma = np.where(upper_side, 1.0, -1.0)
    rho = np.where(upper_side, hi, lo)
    s_hi = np.where(upper_side, np.maximum(hi - lo, 0.0), INF)
    want = sigma * rho
    s_val = np.clip(want, 0.0, s_hi)
    resid = rho - sigma * s_val
    needs_art = np.abs(resid) > 0.0
    art_rows = np.flatnonzero(needs_art)
    k = art_rows.size

    N = n + m + k
    full = np.zeros((m, N))
    full[:, :n] = A
    full[np.arange(m), n + np.arange(m)] = sigma
    art_sign = np.sign(resid[art_rows])
    full[art_rows, n + m + np.arange(k)] = art_sign

    var_lo = np.zeros(N)
    var_hi = np.concatenate((upper - lower, s_hi, np.full(k, INF)))
    at_upper = np.zeros(N, dtype=bool)
    slack_at_upper = needs_art & (s_val > 0.0) & (s_val >= s_hi)
    at_upper[n:n + m] = slack_at_upper

    basis = n + np.arange(m)
    basis[art_rows] = n + m + np.arange(k)
    diag = np.where(needs_art, 0.0, sigma)
    diag[art_rows] = art_sign
    T = full / diag[:, None]
    xB = np.where(needs_art, np.abs(resid), want)
    is_basic = np.zeros(N, dtype=bool)
    is_basic[basis] = True

    tab = _Tableau(T, xB.astype(float), basis, var_lo, var_hi, at_upper, is_basic, tol, 1e-11)
    if max_iter is None:
        max_iter = 50 * (m + N) + 100

    if k:
        cost1 = np.zeros(N)
        cost1[n + m:] = 1.0
        tab.run(cost1, max_iter)
        infeas = float(np.sum(tab.xB[tab.basis >= n + m]))
        if infeas > feas_tol:
            return LPResult(Status.INFEASIBLE, iterations=tab.iterations)
        var_hi[n + m:] = 0.0

    cost2 = np.zeros(N)
    cost2[:n] = lp.c
    status = tab.run(cost2, max_iter)
    if status is Status.UNBOUNDED:
        return LPResult(Status.UNBOUNDED, iterations=tab.iterations)

    # recompute basic values from the nonbasic ones to shed accumulated drift
    values = np.where(tab.at_upper, var_hi, var_lo)
    values[~np.isfinite(values)] = 0.0
    values[tab.basis] = 0.0
    binv = T[:, basis_init_cols(n, m, art_rows)] / diag[None, :]
    rhs = rho - full @ values
    values[tab.basis] = binv @ rhs
    x = lower + values[:n]
    return LPResult(
        Status.OPTIMAL,
        x=x,
        objective=lp.value(x),
        reduced_costs=tab.d[:n].copy(),
        at_upper=tab.at_upper[:n].copy(),
        basic=tab.is_basic[:n].copy(),
        iterations=tab.iterations,
    )


def basis_init_cols(n: int, m: int, art_rows: np.ndarray) -> np.ndarray:
    cols = n + np.arange(m)
    cols[art_rows] = n + m + np.arange(art_rows.size)
    return cols
