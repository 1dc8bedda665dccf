"""Core HetNet model: topology, time-fraction allocations, throughput.

A network is N clients and M base stations (BSs). Client i downloads from BS j
at PHY rate ``rates[i, j]`` Mbps when connected (rate 0 means no link), and a
BS divides its unit airtime among its clients, so client i's long-term
throughput is ``r_i = sum_j lambda[i, j] * rates[i, j]`` subject to per-BS
budgets ``sum_i lambda[i, j] <= 1`` and ``lambda >= 0``.

Everything here is a pure function over immutable values; the dynamics live in
:mod:`ratagg.afra` and :mod:`ratagg.ddnum`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DimensionMismatch,
    NegativeRate,
    NonPositiveThroughput,
    NonPositiveWeight,
    ZeroConnectivityClient,
)

# Feasibility comparisons use this absolute slack.
TOL_FEAS = 1e-9

# Sentinel for the potential of an allocation that starves a client.
NEGATIVE_INFINITY = float("-inf")


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Topology:
    """Immutable network description.

    rates: (N, M) PHY rates in Mbps, 0 where client and BS are not connected.
    weights: (N,) strictly positive client weights.
    bs_tech: per-BS technology label, informational only.
    """

    rates: np.ndarray
    weights: np.ndarray
    bs_tech: tuple[str, ...] = ()

    def __post_init__(self):
        rates = _frozen_array(self.rates)
        if rates.ndim != 2:
            raise DimensionMismatch("rates must be a 2-D (clients x BSs) array")
        weights = _frozen_array(self.weights)
        if weights.shape != (rates.shape[0],):
            raise DimensionMismatch(
                f"weights shape {weights.shape} does not match {rates.shape[0]} clients"
            )
        tech = tuple(self.bs_tech) if self.bs_tech else ("unknown",) * rates.shape[1]
        if len(tech) != rates.shape[1]:
            raise DimensionMismatch(
                f"bs_tech has {len(tech)} entries for {rates.shape[1]} BSs"
            )
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "bs_tech", tech)

    @property
    def num_clients(self) -> int:
        return self.rates.shape[0]

    @property
    def num_bss(self) -> int:
        return self.rates.shape[1]

    @cached_property
    def connected(self) -> np.ndarray:
        """(N, M) boolean connectivity mask."""
        mask = self.rates > 0
        mask.setflags(write=False)
        return mask


def validate_topology(topo: Topology) -> Topology:
    """Check structural invariants, returning the topology or raising.

    Raises ZeroConnectivityClient, NonPositiveWeight or NegativeRate.
    """
    if np.any(topo.rates < 0):
        i, j = np.argwhere(topo.rates < 0)[0]
        raise NegativeRate(f"rate for client {i} at BS {j} is negative")
    if np.any(topo.weights <= 0):
        i = int(np.argmax(topo.weights <= 0))
        raise NonPositiveWeight(f"client {i} has non-positive weight")
    row_links = np.count_nonzero(topo.rates > 0, axis=1)
    if np.any(row_links == 0):
        i = int(np.argmax(row_links == 0))
        raise ZeroConnectivityClient(f"client {i} is connected to no BS")
    return topo


@dataclass(frozen=True)
class Allocation:
    """Time-fraction matrix lambda, shaped like the topology's rates.

    Feasibility (per-BS budget, non-negativity, support on connected links) is
    checked by :func:`check_feasibility`, not enforced at construction.
    """

    lambdas: np.ndarray

    def __post_init__(self):
        lam = _frozen_array(self.lambdas)
        if lam.ndim != 2:
            raise DimensionMismatch("lambdas must be a 2-D (clients x BSs) array")
        object.__setattr__(self, "lambdas", lam)


@dataclass(frozen=True)
class FeasibilityReport:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _check_shape(topo: Topology, alloc: Allocation) -> None:
    if alloc.lambdas.shape != topo.rates.shape:
        raise DimensionMismatch(
            f"allocation shape {alloc.lambdas.shape} does not match "
            f"rates shape {topo.rates.shape}"
        )


def client_throughput(topo: Topology, alloc: Allocation) -> np.ndarray:
    """Per-client throughput r_i = sum_j lambda[i, j] * rates[i, j]."""
    _check_shape(topo, alloc)
    return np.sum(alloc.lambdas * topo.rates, axis=1)


def check_feasibility(topo: Topology, alloc: Allocation) -> FeasibilityReport:
    """Verify per-BS budgets, non-negativity and support, within TOL_FEAS."""
    _check_shape(topo, alloc)
    lam = alloc.lambdas
    violations: list[str] = []
    col_sums = lam.sum(axis=0)
    for j in np.nonzero(col_sums > 1.0 + TOL_FEAS)[0]:
        violations.append(f"BS {j} airtime over budget: sum={col_sums[j]!r}")
    if np.any(lam < -TOL_FEAS):
        i, j = np.argwhere(lam < -TOL_FEAS)[0]
        violations.append(f"negative time fraction for client {i} at BS {j}")
    unsupported = (lam > TOL_FEAS) & ~topo.connected
    if np.any(unsupported):
        i, j = np.argwhere(unsupported)[0]
        violations.append(f"client {i} holds airtime at BS {j} with no link")
    return FeasibilityReport(ok=not violations, violations=tuple(violations))


def potential(topo: Topology, throughput: np.ndarray) -> float:
    """Weighted log-throughput sum; NEGATIVE_INFINITY if any client starves."""
    r = np.asarray(throughput, dtype=float)
    if r.shape != (topo.num_clients,):
        raise DimensionMismatch(
            f"throughput shape {r.shape} does not match {topo.num_clients} clients"
        )
    if np.any(r <= 0):
        return NEGATIVE_INFINITY
    return float(np.dot(topo.weights, np.log(r)))


def pf_index(throughput) -> float:
    """Unweighted sum of log10 throughputs, the aggregate fairness score."""
    r = np.asarray(throughput, dtype=float)
    if np.any(r <= 0):
        raise NonPositiveThroughput("pf_index needs strictly positive throughput")
    return float(np.sum(np.log10(r)))


def water_levels(
    topo: Topology, alloc: Allocation, throughput: np.ndarray | None = None
) -> np.ndarray:
    """Per-BS water level theta_j, NaN for BSs with no connected client.

    theta_j is the smallest r_i / (w_i * rates[i, j]) over clients served by
    BS j (over connected clients when the BS currently serves nobody). At a
    water-filling fixed point every served client of BS j sits exactly at
    theta_j.
    """
    _check_shape(topo, alloc)
    r = client_throughput(topo, alloc) if throughput is None else np.asarray(throughput, dtype=float)
    keys = np.full(topo.rates.shape, np.inf)
    np.divide(
        r[:, None],
        topo.weights[:, None] * topo.rates,
        out=keys,
        where=topo.connected,
    )
    levels = np.full(topo.num_bss, np.nan)
    served = alloc.lambdas > 0
    for j in range(topo.num_bss):
        mask = served[:, j] if served[:, j].any() else topo.connected[:, j]
        if mask.any():
            levels[j] = keys[mask, j].min()
    return levels


@dataclass(frozen=True)
class ThroughputView:
    """Derived per-client throughput and per-BS water levels."""

    throughput: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "throughput", _frozen_array(self.throughput))
        object.__setattr__(self, "theta", _frozen_array(self.theta))


def throughput_view(topo: Topology, alloc: Allocation) -> ThroughputView:
    r = client_throughput(topo, alloc)
    return ThroughputView(throughput=r, theta=water_levels(topo, alloc, r))
