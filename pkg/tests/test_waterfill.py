"""Single-BS water-filling: sorted keys, cascade index, water level, shares."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratagg import (
    EmptyClientSet,
    WaterfillInput,
    find_k,
    single_bs_pf_shares,
    solve_theta,
    sort_clients,
    waterfill_allocate,
)

BUDGET_TOL = 1e-9


def _wf_strategy():
    """Random local views with a controllable spread of keys."""

    def build(draw):
        n = draw(st.integers(1, 9))
        rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
        ext = rng.uniform(0.0, 30.0, size=n)
        # sprinkle exact zeros so the fresh-client path gets exercised
        ext[rng.random(n) < 0.3] = 0.0
        return WaterfillInput(
            bs_index=0,
            clients=np.arange(n),
            ext_throughput=ext,
            weights=rng.uniform(0.25, 4.0, size=n),
            rates=rng.uniform(0.5, 60.0, size=n),
        )

    return st.builds(lambda d: d, st.composite(build)())


def _enumerate_valid_prefixes(wf):
    """Every prefix length m whose water level serves exactly that prefix.

    Brute-force restatement of the cascade: theta_m = (1 + B_m) / W_m is
    admissible iff the first m sorted clients sit at or below it and client
    m+1 (if any) sits at or above it. The closed form and the scan must agree
    on the resulting shares for every admissible m.
    """
    order = sort_clients(wf)
    keys = wf.keys()[order]
    w = wf.weights[order]
    b = wf.ext_throughput[order] / wf.rates[order]
    valid = []
    for m in range(1, wf.num_clients + 1):
        theta = (1.0 + b[:m].sum()) / w[:m].sum()
        if theta < keys[m - 1] - 1e-12:
            continue
        if m < wf.num_clients and keys[m] < theta - 1e-12:
            continue
        valid.append((m, theta))
    return order, valid


@given(st.lists(st.floats(0.05, 20.0), min_size=1, max_size=12))
@settings(max_examples=200, deadline=None)
def test_single_bs_shares_are_weight_fractions(weights):
    w = np.asarray(weights)
    shares = single_bs_pf_shares(w)
    np.testing.assert_allclose(shares, w / w.sum(), rtol=0, atol=1e-12)
    assert math.isclose(shares.sum(), 1.0, abs_tol=1e-12)


def test_frozen_three_client_cascade(pencil_waterfill):
    """ext (2, 0, 4) against rates (10, 10, 5): middle client alone is fresh."""
    order = sort_clients(pencil_waterfill)
    assert order.tolist() == [1, 0, 2]
    k = find_k(pencil_waterfill, order)
    assert k == 2
    theta = solve_theta(pencil_waterfill, order, k)
    assert math.isclose(theta, 0.6, abs_tol=1e-12)
    result = waterfill_allocate(pencil_waterfill)
    np.testing.assert_allclose(result.lambdas, [0.4, 0.6, 0.0], atol=1e-12)
    assert result.served.tolist() == [True, True, False]


def test_frozen_rich_client_shut_out():
    """A client already at 12 Mbps gets nothing while its peer takes the BS."""
    wf = WaterfillInput(
        bs_index=3,
        clients=np.array([0, 1]),
        ext_throughput=np.array([0.0, 12.0]),
        weights=np.ones(2),
        rates=np.array([10.0, 10.0]),
    )
    result = waterfill_allocate(wf)
    assert result.k == 1
    assert math.isclose(result.theta, 1.0, abs_tol=1e-12)
    np.testing.assert_allclose(result.lambdas, [1.0, 0.0], atol=1e-12)


def test_sort_breaks_key_ties_by_client_id():
    wf = WaterfillInput(
        bs_index=0,
        clients=np.array([7, 2, 5]),
        ext_throughput=np.zeros(3),
        weights=np.ones(3),
        rates=np.full(3, 8.0),
    )
    assert sort_clients(wf).tolist() == [1, 2, 0]  # ids 2, 5, 7


def test_empty_client_set_rejected():
    with pytest.raises(EmptyClientSet):
        WaterfillInput(
            bs_index=0,
            clients=np.array([], dtype=int),
            ext_throughput=np.array([]),
            weights=np.array([]),
            rates=np.array([]),
        )


def test_input_validation():
    with pytest.raises(ValueError):
        WaterfillInput(
            bs_index=0,
            clients=np.array([0]),
            ext_throughput=np.array([-1.0]),
            weights=np.array([1.0]),
            rates=np.array([5.0]),
        )
    with pytest.raises(ValueError):
        WaterfillInput(
            bs_index=0,
            clients=np.array([0]),
            ext_throughput=np.array([0.0]),
            weights=np.array([1.0]),
            rates=np.array([0.0]),
        )


@given(_wf_strategy())
@settings(max_examples=300, deadline=None)
def test_allocation_matches_prefix_scan(wf):
    order, valid = _enumerate_valid_prefixes(wf)
    assert valid, "cascade must admit at least one prefix"
    result = waterfill_allocate(wf)
    assert result.k == valid[0][0] or len(valid) > 1
    # every admissible prefix produces the same shares as the implementation
    keys = wf.keys()
    for m, theta in valid:
        lam = np.maximum(wf.weights * (theta - keys), 0.0)
        lam[order[m:]] = 0.0
        np.testing.assert_allclose(lam, result.lambdas, atol=1e-9)


@given(_wf_strategy())
@settings(max_examples=300, deadline=None)
def test_allocation_equalities(wf):
    result = waterfill_allocate(wf)
    lam = result.lambdas
    assert np.all(lam >= 0.0)
    assert math.isclose(lam.sum(), 1.0, abs_tol=BUDGET_TOL)
    # served clients land exactly on the water level ...
    new_keys = (wf.ext_throughput + lam * wf.rates) / (wf.weights * wf.rates)
    np.testing.assert_allclose(new_keys[result.served], result.theta, atol=1e-9)
    # ... and everyone shut out was already at or above it
    assert np.all(wf.keys()[~result.served] >= result.theta - BUDGET_TOL)
    assert result.served.sum() == result.k


@given(_wf_strategy(), st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_water_level_is_local_pf_optimum(wf, seed):
    """No feasible redistribution of this BS's airtime beats the cascade."""
    result = waterfill_allocate(wf)
    base = np.sum(
        wf.weights * np.log(wf.ext_throughput + result.lambdas * wf.rates)
    )
    rng = np.random.default_rng(seed)
    for _ in range(40):
        raw = rng.dirichlet(np.ones(wf.num_clients))
        r = wf.ext_throughput + raw * wf.rates
        if np.any(r <= 0):
            continue
        assert np.sum(wf.weights * np.log(r)) <= base + 1e-7
