"""Single-BS proportional-fair water-filling.

A BS divides one unit of airtime among its connected clients. Client i brings
an externally supplied throughput ``ext_throughput[i]`` (what it already gets
from every other BS), a weight ``w_i`` and a PHY rate ``R_i`` on this BS. The
proportionally fair split solves

    max  sum_i w_i * ln(ext_i + lam_i * R_i)   s.t.  lam >= 0, sum_i lam_i = 1

whose optimum is a water-filling: sort clients by the normalized level
``key_i = ext_i / (w_i * R_i)``, pour airtime into the lowest keys until a
common level theta is reached. Clients above theta get nothing; the k served
clients end exactly at

    (ext_i + lam_i * R_i) / (w_i * R_i) = theta,
    theta = (1 + sum_{i<=k} ext_i / R_i) / sum_{i<=k} w_i,

and every excluded client satisfies key_i >= theta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyClientSet
from .model import _frozen_array


def single_bs_pf_shares(weights) -> np.ndarray:
    """Weighted PF airtime shares for clients with no outside throughput.

    With ext = 0 the water-fill closed form collapses to lam_i = w_i / sum(w),
    independent of the PHY rates.
    """
    w = np.asarray(weights, dtype=float)
    if w.size == 0:
        raise EmptyClientSet("no clients to share airtime among")
    if np.any(w <= 0):
        raise ValueError("weights must be strictly positive")
    return w / np.sum(w)


@dataclass(frozen=True)
class WaterfillInput:
    """One BS's local view: parallel arrays over its connected clients.

    clients: global client ids (ascending is not required; ties in the sort
        break by this id).
    ext_throughput: throughput each client already gets from other BSs, >= 0.
    weights: strictly positive client weights.
    rates: strictly positive PHY rates to this BS.
    """

    bs_index: int
    clients: np.ndarray
    ext_throughput: np.ndarray
    weights: np.ndarray
    rates: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "clients", _frozen_array(self.clients, dtype=int))
        for name in ("ext_throughput", "weights", "rates"):
            object.__setattr__(self, name, _frozen_array(getattr(self, name)))
        n = self.clients.shape[0]
        if n == 0:
            raise EmptyClientSet(f"BS {self.bs_index} has no connected clients")
        for name in ("ext_throughput", "weights", "rates"):
            if getattr(self, name).shape != (n,):
                raise ValueError(f"{name} must have one entry per client")
        if np.any(self.ext_throughput < 0):
            raise ValueError("external throughput must be non-negative")
        if np.any(self.weights <= 0) or np.any(self.rates <= 0):
            raise ValueError("weights and rates must be strictly positive")

    @property
    def num_clients(self) -> int:
        return self.clients.shape[0]

    def keys(self) -> np.ndarray:
        """Normalized fill levels ext_i / (w_i * R_i)."""
        return self.ext_throughput / (self.weights * self.rates)


def sort_clients(wf: WaterfillInput) -> np.ndarray:
    """Positions of the clients in ascending key order, ties by client id."""
    return np.lexsort((wf.clients, wf.keys()))


def find_k(wf: WaterfillInput, order: np.ndarray | None = None) -> int:
    """Number of clients that receive airtime.

    Walking the sorted keys, filling the first m clients up to key_{m+1}
    costs sum_{i<=m} w_i * (key_{m+1} - key_i); the cascade stops at the first
    m where that cost reaches the unit budget. If the budget survives the
    whole walk, everyone is served.
    """
    if order is None:
        order = sort_clients(wf)
    keys = wf.keys()[order]
    w = wf.weights[order]
    cum_w = np.cumsum(w)
    cum_wk = np.cumsum(w * keys)
    # cost to lift the first m clients to key_{m+1}, for m = 1 .. n-1
    costs = keys[1:] * cum_w[:-1] - cum_wk[:-1]
    hits = np.nonzero(costs >= 1.0)[0]
    return int(hits[0]) + 1 if hits.size else wf.num_clients


def solve_theta(wf: WaterfillInput, order: np.ndarray | None = None, k: int | None = None) -> float:
    """Common level of the k served clients given the unit airtime budget."""
    if order is None:
        order = sort_clients(wf)
    if k is None:
        k = find_k(wf, order)
    served = order[:k]
    numerator = 1.0 + np.sum(wf.ext_throughput[served] / wf.rates[served])
    return float(numerator / np.sum(wf.weights[served]))


@dataclass(frozen=True)
class WaterfillResult:
    """Water-fill outcome, aligned with the input's client order."""

    theta: float
    k: int
    lambdas: np.ndarray
    served: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lambdas", _frozen_array(self.lambdas))
        object.__setattr__(self, "served", _frozen_array(self.served, dtype=bool))


def waterfill_allocate(wf: WaterfillInput) -> WaterfillResult:
    """Full water-fill: sort, cascade, solve theta, emit time fractions.

    The served fractions are lam_i = w_i * (theta - key_i) > 0 (clamped at 0
    against float round-off when a key ties the level); excluded clients keep
    key_i >= theta and get 0. The fractions sum to 1 up to rounding.
    """
    order = sort_clients(wf)
    k = find_k(wf, order)
    theta = solve_theta(wf, order, k)
    lambdas = np.zeros(wf.num_clients)
    served_pos = order[:k]
    fill = wf.weights[served_pos] * (theta - wf.keys()[served_pos])
    lambdas[served_pos] = np.maximum(fill, 0.0)
    served = np.zeros(wf.num_clients, dtype=bool)
    served[served_pos] = True
    return WaterfillResult(theta=theta, k=k, lambdas=lambdas, served=served)
