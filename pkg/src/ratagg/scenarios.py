"""Random topology generation and small reference examples.

The random generator models a dense deployment with two technology classes:
the first half of the BSs are WiFi, the second half cellular. Every client is
in range of two distinct BSs of each class, with the PHY rate of each link
drawn uniformly from the class's discrete rate set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientBSs
from .model import Allocation, Topology, validate_topology

WIFI_RATES = (1.0, 2.0, 5.5, 11.0)
CELLULAR_RATES = (5.2, 10.3, 25.5, 51.0)


@dataclass(frozen=True)
class ScenarioParams:
    num_clients: int
    num_bss: int
    rats_per_client: int = 4
    wifi_rate_set: tuple[float, ...] = WIFI_RATES
    cellular_rate_set: tuple[float, ...] = CELLULAR_RATES
    weights: tuple[float, ...] | None = None  # None means all ones
    seed: int = 0

    def __post_init__(self):
        if self.num_clients < 1:
            raise ValueError("need at least one client")
        if self.num_bss < 2 or self.num_bss % 2:
            raise ValueError("num_bss must be even (half WiFi, half cellular)")
        if self.rats_per_client < 2 or self.rats_per_client % 2:
            raise ValueError("rats_per_client must be even (split across classes)")
        if not self.wifi_rate_set or not self.cellular_rate_set:
            raise ValueError("rate sets must be non-empty")
        if min(self.wifi_rate_set) <= 0 or min(self.cellular_rate_set) <= 0:
            raise ValueError("rates must be strictly positive")
        if self.weights is not None and len(self.weights) != self.num_clients:
            raise ValueError("weights length must equal num_clients")


def generate_random(params: ScenarioParams) -> Topology:
    """Draw a random topology; deterministic in params.seed."""
    per_class = params.rats_per_client // 2
    half = params.num_bss // 2
    if per_class > half:
        raise InsufficientBSs(
            f"{per_class} links per class need at least {per_class} BSs per class, "
            f"have {half}"
        )
    rng = np.random.default_rng(params.seed)
    rates = np.zeros((params.num_clients, params.num_bss))
    classes = (
        (np.arange(half), np.asarray(params.wifi_rate_set)),
        (np.arange(half, params.num_bss), np.asarray(params.cellular_rate_set)),
    )
    for i in range(params.num_clients):
        for bss, rate_set in classes:
            picked = rng.choice(bss, size=per_class, replace=False)
            rates[i, picked] = rng.choice(rate_set, size=per_class)
    weights = (
        np.ones(params.num_clients)
        if params.weights is None
        else np.asarray(params.weights, dtype=float)
    )
    tech = ("wifi",) * half + ("cellular",) * half
    return validate_topology(Topology(rates=rates, weights=weights, bs_tech=tech))


def alpha_family_example() -> tuple[Topology, "AlphaFamily", np.ndarray]:
    """Two clients, two BSs, a one-parameter family of optimal allocations.

    Client 0 sees rate 1 everywhere, client 1 rate 2 everywhere, both weights
    2. Splitting each BS as (alpha, 1 - alpha) leaves the throughput pinned at
    (1, 2) for every alpha in [0, 1]: the optimum is unique in throughput but
    not in time fractions.
    """
    topo = validate_topology(
        Topology(
            rates=np.array([[1.0, 1.0], [2.0, 2.0]]),
            weights=np.array([2.0, 2.0]),
            bs_tech=("wifi", "cellular"),
        )
    )
    return topo, AlphaFamily(), np.array([1.0, 2.0])


class AlphaFamily:
    """Callable alpha -> Allocation for the example above."""

    def __call__(self, alpha: float) -> Allocation:
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        return Allocation(
            lambdas=np.array([[alpha, 1.0 - alpha], [1.0 - alpha, alpha]])
        )
