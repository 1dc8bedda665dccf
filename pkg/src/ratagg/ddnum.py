"""Dual-decomposition baseline for the same PF aggregation problem.

BSs publish airtime prices mu_j; each client answers the current prices with
the allocation that maximizes w_i * ln(r_i) - sum_j mu_j * lam_ij, which for a
log utility concentrates its whole request on the best rate-per-price BS with
lam = w_i / mu_j*. Prices then follow a projected subgradient step on the
dual: mu_j <- [mu_j - gamma * (1 - requested airtime)]+, clamped to a small
floor. Raw iterates can overdraw a BS, so progress is measured on a
feasibility projection (columns over budget rescaled), and the run stops once
the projected potential reaches a target, by convention 95% of what the
water-filling dynamics achieve at equilibrium on the same topology.

Overhead accounting: a price announcement is one broadcast, and every client
that re-solves its subproblem in response (all clients connected to the acting
BS) tells each of its BSs the new request, one message per connected BS --
price signals travel one way, requests the other, so both directions count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoFeasibleGamma
from .model import (
    Allocation,
    Topology,
    _frozen_array,
    client_throughput,
    pf_index,
    potential,
    validate_topology,
    water_levels,
)

MU_FLOOR = 1e-9

# Geometric step-size grid used when gamma is tuned automatically.
DEFAULT_GAMMA_GRID = tuple(np.geomspace(1e-3, 1e1, 16))

TARGET_FRACTION = 0.95


@dataclass(frozen=True)
class PriceVector:
    """Per-BS airtime prices with the step size that produced them."""

    mu: np.ndarray
    gamma: float
    mu_floor: float = MU_FLOOR

    def __post_init__(self):
        object.__setattr__(self, "mu", _frozen_array(self.mu))
        if np.any(self.mu < 0):
            raise ValueError("prices must be non-negative")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class DdnumConfig:
    """Run parameters.

    gamma None means tune over DEFAULT_GAMMA_GRID; target_potential None means
    TARGET_FRACTION times the equilibrium potential of a water-filling run on
    the same topology (epsilon 0.05, random sequential policy, same seed).
    """

    gamma: float | None = None
    target_potential: float | None = None
    max_iterations: int = 5_000
    seed: int = 0
    mu_floor: float = MU_FLOOR

    def __post_init__(self):
        if self.gamma is not None and self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.mu_floor <= 0:
            raise ValueError("mu_floor must be positive")


def client_subproblem(client: int, mu: np.ndarray, topo: Topology) -> np.ndarray:
    """Best response of one client to the current prices.

    Concentrates the whole request on the connected BS maximizing R_ij / mu_j
    (ties to the lowest BS id) at lam = w_i / mu_j*.
    """
    rates = topo.rates[client]
    ratio = np.where(topo.connected[client], rates / mu, -np.inf)
    best = int(np.argmax(ratio))
    row = np.zeros(topo.num_bss)
    row[best] = topo.weights[client] / mu[best]
    return row


def price_update(mu_j: float, gamma: float, total_requested: float, mu_floor: float = MU_FLOOR) -> float:
    """Projected subgradient step on one BS's price, clamped to the floor."""
    stepped = mu_j - gamma * (1.0 - total_requested)
    return max(stepped, 0.0, mu_floor)


def project_feasible(raw_lambdas: np.ndarray) -> Allocation:
    """Rescale any column over the unit budget; leave the rest untouched."""
    raw = np.asarray(raw_lambdas, dtype=float)
    scale = np.maximum(raw.sum(axis=0), 1.0)
    return Allocation(lambdas=raw / scale)


def count_ddnum_messages(price_broadcasts: int, responder_connections=()) -> int:
    """Message cost of one pricing event.

    Each price broadcast is one message; each client that re-solves in
    response announces its request to every BS it is connected to, so a
    responder with k connected BSs contributes k messages.
    """
    return int(price_broadcasts) + int(sum(int(k) for k in responder_connections))


@dataclass(frozen=True)
class DdnumStepRecord:
    """One price update."""

    iteration: int
    bs_id: int
    mu_after: float
    potential_projected: float
    cum_messages: int


@dataclass(frozen=True)
class DdnumSummary:
    steps: int
    flagged: bool  # True when the target stayed out of reach
    final_potential: float
    pf_index: float | None
    throughput: np.ndarray
    theta: np.ndarray
    total_messages: int
    gamma: float
    target_potential: float

    def __post_init__(self):
        object.__setattr__(self, "throughput", _frozen_array(self.throughput))
        object.__setattr__(self, "theta", _frozen_array(self.theta))


@dataclass(frozen=True)
class DdnumRunResult:
    allocation: Allocation  # feasibility-projected
    raw_requests: np.ndarray
    prices: PriceVector
    trace: tuple[DdnumStepRecord, ...]
    summary: DdnumSummary

    def __post_init__(self):
        object.__setattr__(self, "raw_requests", _frozen_array(self.raw_requests))


def _resolve_target(topo: Topology, config: DdnumConfig) -> float:
    if config.target_potential is not None:
        return config.target_potential
    from .afra import Policy, SimConfig, run_afra

    afra = run_afra(
        topo,
        SimConfig(epsilon=0.05, policy=Policy.RANDOM_SEQUENTIAL, seed=config.seed),
    )
    return TARGET_FRACTION * afra.summary.final_potential


def _price_rounds(
    topo: Topology,
    gamma: float,
    target: float,
    max_iterations: int,
    mu_floor: float,
) -> tuple[np.ndarray, np.ndarray, list[DdnumStepRecord], bool]:
    """Run the sequential price/allocation rounds; core of run_ddnum."""
    n, m = topo.num_clients, topo.num_bss
    mu = np.full(m, max(float(np.sum(topo.weights)) / m, mu_floor))
    clients_of = [np.nonzero(topo.connected[:, j])[0] for j in range(m)]
    degree = topo.connected.sum(axis=1)
    # Every BS broadcasts mu(0); every client answers with its first request.
    requests = np.zeros((n, m))
    for i in range(n):
        requests[i] = client_subproblem(i, mu, topo)
    messages = count_ddnum_messages(m, degree)
    trace: list[DdnumStepRecord] = []
    reached = False
    for it in range(1, max_iterations + 1):
        j = (it - 1) % m
        for i in clients_of[j]:
            requests[i] = client_subproblem(int(i), mu, topo)
        mu[j] = price_update(mu[j], gamma, float(requests[:, j].sum()), mu_floor)
        messages += count_ddnum_messages(1, degree[clients_of[j]])
        projected = project_feasible(requests)
        value = potential(topo, client_throughput(topo, projected))
        trace.append(
            DdnumStepRecord(
                iteration=it,
                bs_id=j,
                mu_after=float(mu[j]),
                potential_projected=value,
                cum_messages=messages,
            )
        )
        if value >= target:
            reached = True
            break
    return mu, requests, trace, reached


def run_ddnum(topo: Topology, config: DdnumConfig) -> DdnumRunResult:
    """Price dynamics until the projected potential reaches the target.

    The BS order is round-robin by id; an iteration is one price update. When
    the target is still unmet after max_iterations the summary comes back
    flagged rather than raising.
    """
    validate_topology(topo)
    target = _resolve_target(topo, config)
    gamma = config.gamma
    if gamma is None:
        gamma = tune_gamma(
            topo,
            target,
            max_iterations=config.max_iterations,
            mu_floor=config.mu_floor,
        )
    mu, requests, trace, reached = _price_rounds(
        topo, gamma, target, config.max_iterations, config.mu_floor
    )
    projected = project_feasible(requests)
    throughput = client_throughput(topo, projected)
    value = potential(topo, throughput)
    summary = DdnumSummary(
        steps=len(trace),
        flagged=not reached,
        final_potential=value,
        pf_index=pf_index(throughput) if np.all(throughput > 0) else None,
        throughput=throughput,
        theta=water_levels(topo, projected, throughput),
        total_messages=trace[-1].cum_messages
        if trace
        else count_ddnum_messages(topo.num_bss, topo.connected.sum(axis=1)),
        gamma=float(gamma),
        target_potential=float(target),
    )
    return DdnumRunResult(
        allocation=projected,
        raw_requests=requests,
        prices=PriceVector(mu=mu, gamma=float(gamma), mu_floor=config.mu_floor),
        trace=tuple(trace),
        summary=summary,
    )


def _tuning_runs(
    topo: Topology,
    target: float,
    grid,
    max_iterations: int,
    mu_floor: float,
) -> list[tuple[float, int, bool]]:
    rows = []
    for gamma in grid:
        _, _, trace, reached = _price_rounds(topo, float(gamma), target, max_iterations, mu_floor)
        rows.append((float(gamma), len(trace), reached))
    return rows


def tune_gamma(
    topo: Topology,
    target: float,
    grid=DEFAULT_GAMMA_GRID,
    max_iterations: int = 5_000,
    mu_floor: float = MU_FLOOR,
) -> float:
    """Pick the grid step size reaching the target in the fewest updates.

    Ties resolve to the earliest grid point. Raises NoFeasibleGamma when no
    grid point reaches the target within max_iterations.
    """
    rows = _tuning_runs(topo, target, grid, max_iterations, mu_floor)
    feasible = [(steps, gamma) for gamma, steps, reached in rows if reached]
    if not feasible:
        raise NoFeasibleGamma(
            f"no step size in the {len(rows)}-point grid reached potential {target!r}"
        )
    best_steps = min(steps for steps, _ in feasible)
    for steps, gamma in feasible:
        if steps == best_steps:
            return gamma
    raise AssertionError("unreachable")
