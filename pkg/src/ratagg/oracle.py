"""Independent global PF solver and equilibrium verification.

The solver attacks max sum_i w_i * ln(r_i) directly with projected gradient
ascent on the full time-fraction matrix, projecting each BS column onto
{x >= 0, sum(x) <= 1}. It shares nothing with the water-filling or price
dynamics code paths on purpose: it is the referee, not a player. Against its
optimum we check the three fixed-point identities of the dynamics

    I   w_i * R_ij / r_i <= 1 / theta_j          for every connected pair,
    II  sum_i lam_ij = 1                          at every BS with clients,
    III sum_i w_i = sum_j 1 / theta_j             over BSs with clients,

the optimality gap, and the uniqueness of equilibrium throughput across
independently seeded runs (time fractions themselves may differ).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence
from .model import (
    Allocation,
    Topology,
    _frozen_array,
    client_throughput,
    potential,
    validate_topology,
    water_levels,
)


def _project(lambdas: np.ndarray) -> np.ndarray:
    """Column-wise Euclidean projection onto {x >= 0, sum(x) <= 1}.

    Columns within budget just lose their negative parts; columns over budget
    get the classic sorted-threshold projection onto the probability simplex.
    """
    clipped = np.maximum(lambdas, 0.0)
    over = clipped.sum(axis=0) > 1.0
    if not over.any():
        return clipped
    y = lambdas[:, over]
    u = -np.sort(-y, axis=0)  # descending per column
    css = np.cumsum(u, axis=0) - 1.0
    idx = np.arange(1, y.shape[0] + 1)[:, None]
    cond = u > css / idx
    rho = y.shape[0] - 1 - np.argmax(cond[::-1, :], axis=0)
    tau = np.take_along_axis(css, rho[None, :], axis=0)[0] / (rho + 1.0)
    out = clipped
    out[:, over] = np.maximum(y - tau[None, :], 0.0)
    return out


@dataclass(frozen=True)
class GlobalPfSolution:
    objective: float
    throughput: np.ndarray
    lambdas: np.ndarray
    iterations: int
    residual: float

    def __post_init__(self):
        object.__setattr__(self, "throughput", _frozen_array(self.throughput))
        object.__setattr__(self, "lambdas", _frozen_array(self.lambdas))


def solve_global_pf(
    topo: Topology,
    tol: float = 1e-7,
    max_iterations: int = 100_000,
) -> GlobalPfSolution:
    """Projected gradient ascent to the global PF optimum.

    Backtracked steps against the smoothness majorizer, Nesterov momentum with
    a function-value restart (the log objective is badly conditioned when
    rates span two orders of magnitude), and a monotone safeguard. Starting
    from the strictly feasible equal split keeps every throughput bounded away
    from zero along the monotone subsequence. Stationarity is the largest
    movement of a unit-step projected gradient, which vanishes exactly at the
    constrained optimum. Raises NoConvergence past max_iterations.
    """
    validate_topology(topo)
    mask = topo.connected
    counts = np.count_nonzero(mask, axis=0)
    lam = np.where(mask, 1.0 / np.maximum(counts, 1), 0.0)
    w = topo.weights
    rates = topo.rates

    def throughput_of(mat: np.ndarray) -> np.ndarray:
        return np.sum(mat * rates, axis=1)

    def grad(r: np.ndarray) -> np.ndarray:
        return np.where(mask, (w / r)[:, None] * rates, 0.0)

    f = potential(topo, throughput_of(lam))
    y = lam
    t = 1.0
    step = 1.0
    residual = np.inf
    for it in range(1, max_iterations + 1):
        r = throughput_of(lam)
        g = grad(r)
        residual = float(np.max(np.abs(_project(lam + g) - lam)))
        if residual <= tol:
            return GlobalPfSolution(
                objective=f, throughput=r, lambdas=lam, iterations=it, residual=residual
            )
        r_y = throughput_of(y)
        if np.any(r_y <= 0):  # momentum overshot the domain: fall back to lam
            y, t, r_y = lam, 1.0, r
        f_y = float(np.dot(w, np.log(r_y)))
        g_y = grad(r_y)
        while True:
            cand = _project(y + step * g_y)
            d = cand - y
            f_cand = potential(topo, throughput_of(cand))
            if f_cand >= f_y + float(np.sum(g_y * d)) - (0.5 / step) * float(np.sum(d * d)):
                break
            step *= 0.5
            if step < 1e-18:
                raise NoConvergence("backtracking stalled before reaching tol")
        if f_cand < f:  # momentum lost ground: restart from the best point
            y, t = lam, 1.0
            continue
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        y = cand + ((t - 1.0) / t_next) * (cand - lam)
        lam, f, t = cand, f_cand, t_next
        step = min(step * 1.3, 1e12)
    raise NoConvergence(
        f"no stationary point within {max_iterations} iterations (residual {residual:.3e})"
    )


def convergence_step_bound(topo: Topology, epsilon: float) -> float:
    """Worst-case count of accepted water-fill updates before equilibrium.

    Ratio of the largest possible potential climb to the guaranteed per-step
    increment 0.5 * w_min * (epsilon * R_min / (M * R_max))^2, with R_min the
    smallest positive rate. Scale-free in the rates and zero for a lone
    client on a lone BS.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    validate_topology(topo)
    w_sum = float(np.sum(topo.weights))
    w_min = float(np.min(topo.weights))
    r_max = float(np.max(topo.rates))
    r_min = float(np.min(topo.rates[topo.rates > 0]))
    m = topo.num_bss
    climb = w_sum * (np.log(m * r_max) - np.log(w_min * r_min / w_sum))
    increment = 0.5 * w_min * (epsilon * r_min / (m * r_max)) ** 2
    return float(climb / increment)


@dataclass(frozen=True)
class PropertyReport:
    """Residuals and verdicts for the fixed-point identities."""

    prop_i_residual: float
    prop_i_pass: bool
    prop_ii_residual: float
    prop_ii_pass: bool
    prop_iii_residual: float
    prop_iii_pass: bool
    optimality_gap: float | None
    optimality_pass: bool | None
    tol: float
    tol_scaled: float

    @property
    def all_pass(self) -> bool:
        checks = [self.prop_i_pass, self.prop_ii_pass, self.prop_iii_pass]
        if self.optimality_pass is not None:
            checks.append(self.optimality_pass)
        return all(checks)


def check_equilibrium_properties(
    topo: Topology,
    alloc: Allocation,
    epsilon: float = 0.0,
    tol: float = 1e-6,
    global_solution: GlobalPfSolution | None = None,
    compute_global: bool = True,
) -> PropertyReport:
    """Measure how far an allocation sits from the fixed-point identities.

    Properties I and III hold only up to the discretization, so their pass
    tolerance grows to sum(w) * epsilon * R_max / R_min when epsilon > 0;
    property II holds to float precision at any epsilon. The optimality gap
    compares against ``global_solution`` (solved here when absent, skipped
    with compute_global=False) and passes when the gap stays below
    max(1e-3, epsilon) * |f*| -- the same idea of widening with the gate.
    """
    validate_topology(topo)
    alloc = _as_allocation(alloc)
    r = client_throughput(topo, alloc)
    theta = water_levels(topo, alloc, r)
    w = topo.weights
    r_max = float(np.max(topo.rates))
    r_min = float(np.min(topo.rates[topo.rates > 0]))
    tol_scaled = max(tol, float(np.sum(w)) * epsilon * r_max / r_min)

    with np.errstate(divide="ignore"):
        ratio = np.where(topo.connected, w[:, None] * topo.rates / r[:, None], -np.inf)
    has_clients = np.count_nonzero(topo.connected, axis=0) > 0
    inv_theta = np.zeros(topo.num_bss)
    inv_theta[has_clients] = 1.0 / theta[has_clients]
    prop_i = float(np.max(np.maximum(ratio - inv_theta[None, :], 0.0)))

    col_sums = alloc.lambdas.sum(axis=0)
    prop_ii = float(np.max(np.abs(col_sums[has_clients] - 1.0))) if has_clients.any() else 0.0

    prop_iii = float(abs(np.sum(w) - inv_theta.sum()))

    gap = None
    gap_pass = None
    if global_solution is None and compute_global:
        global_solution = solve_global_pf(topo)
    if global_solution is not None:
        f_eq = potential(topo, r)
        gap = float(abs(global_solution.objective - f_eq))
        gap_tol = max(1e-3, epsilon) * abs(global_solution.objective)
        gap_pass = bool(global_solution.objective - f_eq <= gap_tol)
    return PropertyReport(
        prop_i_residual=prop_i,
        prop_i_pass=prop_i <= tol_scaled,
        prop_ii_residual=prop_ii,
        prop_ii_pass=prop_ii <= tol,
        prop_iii_residual=prop_iii,
        prop_iii_pass=prop_iii <= tol_scaled,
        optimality_gap=gap,
        optimality_pass=gap_pass,
        tol=tol,
        tol_scaled=tol_scaled,
    )


@dataclass(frozen=True)
class UniquenessReport:
    passed: bool
    max_throughput_deviation: float
    lambdas_differ: bool
    max_lambda_deviation: float
    tol: float


def _as_allocation(obj) -> Allocation:
    if isinstance(obj, Allocation):
        return obj
    for attr in ("allocation", "state"):
        inner = getattr(obj, attr, None)
        if inner is not None:
            return _as_allocation(inner)
    return Allocation(lambdas=np.asarray(obj, dtype=float))


def verify_uniqueness(
    topo: Topology,
    allocations,
    tol: float,
) -> UniquenessReport:
    """Compare equilibria from independent runs.

    Equilibrium throughput is unique, so the largest pairwise deviation must
    stay below tol; the time fractions may legitimately differ. Accepts
    Allocation values or run states carrying one.
    """
    allocs = [_as_allocation(a) for a in allocations]
    if len(allocs) < 2:
        raise ValueError("need at least two allocations to compare")
    rs = [client_throughput(topo, a) for a in allocs]
    r_dev = 0.0
    lam_dev = 0.0
    for a in range(len(allocs)):
        for b in range(a + 1, len(allocs)):
            r_dev = max(r_dev, float(np.max(np.abs(rs[a] - rs[b]))))
            lam_dev = max(
                lam_dev,
                float(np.max(np.abs(allocs[a].lambdas - allocs[b].lambdas))),
            )
    return UniquenessReport(
        passed=r_dev <= tol,
        max_throughput_deviation=r_dev,
        lambdas_differ=lam_dev > 1e-12,
        max_lambda_deviation=lam_dev,
        tol=tol,
    )
