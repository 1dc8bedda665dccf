"""Distributed water-filling dynamics over a HetNet.

Each step one BS recomputes its local water-fill against the throughput its
clients currently enjoy elsewhere, and commits the new column only if the
update moves its neediest client (minimum r_i / (w_i * R_ij), ties by id) by
at least epsilon. The weighted log-throughput potential strictly increases on
every accepted update, so the dynamics reach an epsilon-equilibrium in a
bounded number of steps regardless of the activation order.

States are immutable; every update returns a fresh state, which also makes
hypothetical probes (gain queries, equilibrium checks) side-effect free.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

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
from .waterfill import WaterfillInput, waterfill_allocate


class Policy(enum.Enum):
    """BS activation policy for the sequential dynamics."""

    RANDOM_SEQUENTIAL = "random"
    PRIORITY_BY_GAIN = "priority"


@dataclass(frozen=True)
class SimConfig:
    """Run parameters for the dynamics.

    activation_probability is reserved for an asynchronous-activation mode and
    is inert in the sequential engine.
    """

    epsilon: float = 0.05
    policy: Policy = Policy.RANDOM_SEQUENTIAL
    seed: int = 0
    max_steps: int = 10_000
    activation_probability: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")
        if not 0.0 < self.activation_probability <= 1.0:
            raise ValueError("activation_probability must lie in (0, 1]")
        if not isinstance(self.policy, Policy):
            object.__setattr__(self, "policy", Policy(self.policy))


@dataclass(frozen=True)
class StepRecord:
    """One accepted BS update."""

    step: int
    bs_id: int
    accepted: bool
    theta_after: float
    potential_after: float
    messages: int


@dataclass(frozen=True)
class SimState:
    """Immutable snapshot of the running system."""

    topology: Topology
    allocation: Allocation
    throughput: np.ndarray
    steps: int = 0
    messages: int = 0
    trace: tuple[StepRecord, ...] = ()

    @cached_property
    def potential(self) -> float:
        return potential(self.topology, self.throughput)

    @cached_property
    def theta(self) -> np.ndarray:
        return water_levels(self.topology, self.allocation, self.throughput)


def initial_allocation(topo: Topology) -> Allocation:
    """Equal split: each BS divides its airtime evenly over its clients."""
    counts = np.count_nonzero(topo.connected, axis=0)
    lam = np.where(topo.connected, 1.0 / np.maximum(counts, 1), 0.0)
    return Allocation(lambdas=lam)


def initial_state(topo: Topology) -> SimState:
    alloc = initial_allocation(topo)
    return SimState(topology=topo, allocation=alloc, throughput=client_throughput(topo, alloc))


def count_update_messages(topo: Topology, old_column: np.ndarray, new_column: np.ndarray) -> int:
    """Messages triggered by one committed column.

    Every client whose fraction changed announces its new total throughput to
    all of its connected BSs, the acting one included.
    """
    changed = old_column != new_column
    if not changed.any():
        return 0
    return int(np.count_nonzero(topo.connected[changed, :]))


@dataclass(frozen=True)
class UpdateResult:
    accepted: bool
    state: SimState
    theta: float


def _local_view(state: SimState, bs: int) -> tuple[np.ndarray, WaterfillInput]:
    topo = state.topology
    ids = np.nonzero(topo.connected[:, bs])[0]
    rates = topo.rates[ids, bs]
    ext = state.throughput[ids] - state.allocation.lambdas[ids, bs] * rates
    return ids, WaterfillInput(
        bs_index=bs,
        clients=ids,
        ext_throughput=np.maximum(ext, 0.0),
        weights=topo.weights[ids],
        rates=rates,
    )


def afra_bs_update(state: SimState, bs: int, epsilon: float) -> UpdateResult:
    """Recompute BS ``bs``'s column and commit it if it passes the gate.

    The gate compares the pending fraction of the BS's neediest client (the
    minimum of r_i / (w_i * R_ij) over connected clients, ties by ascending
    id) against its current fraction; anything below epsilon is discarded and
    the state returned unchanged.
    """
    topo = state.topology
    ids, wf = _local_view(state, bs)
    result = waterfill_allocate(wf)

    now_keys = state.throughput[ids] / (topo.weights[ids] * topo.rates[ids, bs])
    neediest = int(np.argmin(now_keys))  # first minimum = lowest client id
    old_column = state.allocation.lambdas[:, bs]
    delta = result.lambdas[neediest] - old_column[ids[neediest]]
    if delta < epsilon:
        return UpdateResult(accepted=False, state=state, theta=result.theta)

    lam = state.allocation.lambdas.copy()
    lam[:, bs] = 0.0
    lam[ids, bs] = result.lambdas
    alloc = Allocation(lambdas=lam)
    throughput = client_throughput(topo, alloc)
    messages = count_update_messages(topo, old_column, lam[:, bs])
    new_state = SimState(
        topology=topo,
        allocation=alloc,
        throughput=throughput,
        steps=state.steps + 1,
        messages=state.messages + messages,
        trace=state.trace
        + (
            StepRecord(
                step=state.steps + 1,
                bs_id=bs,
                accepted=True,
                theta_after=result.theta,
                potential_after=potential(topo, throughput),
                messages=messages,
            ),
        ),
    )
    return UpdateResult(accepted=True, state=new_state, theta=result.theta)


def potential_gain(state: SimState, bs: int, epsilon: float) -> float:
    """Potential increase a BS update would deliver; 0.0 when gated off."""
    probe = afra_bs_update(state, bs, epsilon)
    if not probe.accepted:
        return 0.0
    return probe.state.potential - state.potential


def _active_bss(topo: Topology) -> np.ndarray:
    return np.nonzero(np.count_nonzero(topo.connected, axis=0) > 0)[0]


def select_next_bs(
    state: SimState,
    policy: Policy,
    rng: np.random.Generator,
    epsilon: float,
) -> int | None:
    """Pick the next BS to act, or None when every update is gated off.

    RANDOM_SEQUENTIAL draws uniformly among the BSs whose pending update
    passes the gate; PRIORITY_BY_GAIN takes the largest potential gain, ties
    to the lowest BS id.
    """
    gated: list[int] = []
    gains: list[float] = []
    for bs in _active_bss(state.topology):
        probe = afra_bs_update(state, int(bs), epsilon)
        if probe.accepted:
            gated.append(int(bs))
            gains.append(probe.state.potential - state.potential)
    if not gated:
        return None
    if policy is Policy.PRIORITY_BY_GAIN:
        return gated[int(np.argmax(gains))]
    return gated[int(rng.integers(len(gated)))]


def is_equilibrium(state: SimState, epsilon: float) -> bool:
    """True when no BS can pass the epsilon gate."""
    return all(
        not afra_bs_update(state, int(bs), epsilon).accepted
        for bs in _active_bss(state.topology)
    )


@dataclass(frozen=True)
class RunSummary:
    steps_to_eq: int
    flagged: bool
    final_potential: float
    pf_index: float
    throughput: np.ndarray
    theta: np.ndarray
    total_messages: int

    def __post_init__(self):
        object.__setattr__(self, "throughput", _frozen_array(self.throughput))
        object.__setattr__(self, "theta", _frozen_array(self.theta))


@dataclass(frozen=True)
class RunResult:
    state: SimState
    summary: RunSummary

    @property
    def trace(self) -> tuple[StepRecord, ...]:
        return self.state.trace


def run_afra(topo: Topology, config: SimConfig) -> RunResult:
    """Drive the dynamics from the equal split until equilibrium.

    Stops when no BS passes the gate, or flags the summary when max_steps
    accepted updates went by first. steps_to_eq counts accepted updates only;
    rejected probes are free of charge and of messages.
    """
    validate_topology(topo)
    rng = np.random.default_rng(config.seed)
    state = initial_state(topo)
    reached_eq = False
    while state.steps < config.max_steps:
        bs = select_next_bs(state, config.policy, rng, config.epsilon)
        if bs is None:
            reached_eq = True
            break
        state = afra_bs_update(state, bs, config.epsilon).state
    if not reached_eq:
        reached_eq = is_equilibrium(state, config.epsilon)
    summary = RunSummary(
        steps_to_eq=state.steps,
        flagged=not reached_eq,
        final_potential=state.potential,
        pf_index=pf_index(state.throughput),
        throughput=state.throughput,
        theta=state.theta,
        total_messages=state.messages,
    )
    return RunResult(state=state, summary=summary)
