"""
Weighted shares on a single base station
========================================

The simplest network: one BS, several clients, no external throughput.
The proportionally fair split of the BS's unit airtime is just the
normalized weights -- the rates drop out entirely.
"""

import numpy as np

from ratagg import WaterfillInput, single_bs_pf_shares, waterfill_allocate

rng = np.random.default_rng(7)

weights = np.array([1.0, 2.0, 5.0])
print("weights:        ", weights)
print("closed form:    ", single_bs_pf_shares(weights))

# The water-fill procedure reaches the same split no matter what the
# per-client rates are, because with no outside traffic every client's
# key r_i / (w_i R_i) starts at zero.
for _ in range(3):
    rates = rng.uniform(1.0, 100.0, size=3)
    wf = WaterfillInput(
        bs_index=0,
        clients=np.arange(3),
        ext_throughput=np.zeros(3),
        weights=weights,
        rates=rates,
    )
    result = waterfill_allocate(wf)
    print(f"rates {np.round(rates, 1)} -> fractions {result.lambdas}")

# Once a client already receives traffic from elsewhere, it needs less help
# here: give client 2 a big external throughput and it drops out of the
# water-fill entirely.
wf = WaterfillInput(
    bs_index=0,
    clients=np.arange(3),
    ext_throughput=np.array([0.0, 0.0, 80.0]),
    weights=weights,
    rates=np.array([10.0, 10.0, 10.0]),
)
result = waterfill_allocate(wf)
print("\nwith client 2 well served elsewhere:")
print("  served:   ", result.served)
print("  fractions:", result.lambdas)
print("  level:    ", result.theta)
