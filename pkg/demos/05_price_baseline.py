"""
The price-based baseline, and why it costs more
===============================================

The classic alternative to water-filling is dual decomposition: BSs post
airtime prices, clients buy from their cheapest-per-bit BS, prices adjust
toward market clearing. It works, but it needs a step size tuned per
network, and every price change makes all clients of that BS re-solve and
re-announce -- more iterations and far more messages for the same outcome.
"""


from ratagg import (
    DdnumConfig,
    ScenarioParams,
    SimConfig,
    compare_algorithms,
    generate_random,
    run_afra,
    run_ddnum,
    tune_gamma,
)

topo = generate_random(ScenarioParams(num_clients=20, num_bss=10, seed=4))

afra = run_afra(topo, SimConfig(epsilon=0.05, seed=4))
target = 0.95 * afra.summary.final_potential
print("water-filling: {} steps, {} messages, potential {:.4f}".format(
    afra.summary.steps_to_eq, afra.summary.total_messages,
    afra.summary.final_potential))
print("baseline target: 95% of that potential = {:.4f}".format(target))

gamma = tune_gamma(topo, target)
print(f"\ntuned price step: gamma = {gamma:.4g}")

dd = run_ddnum(topo, DdnumConfig(gamma=gamma, target_potential=target, seed=4))
print("price baseline: {} iterations, {} messages, potential {:.4f}".format(
    dd.summary.steps, dd.summary.total_messages, dd.summary.final_potential))
print("cost ratio: {:.2f}x steps, {:.2f}x messages".format(
    dd.summary.steps / afra.summary.steps_to_eq,
    dd.summary.total_messages / afra.summary.total_messages))

# the first few price moves: every BS starts at total weight / number of BSs
print("\nfirst price iterations:")
for rec in dd.trace[:4]:
    print(f"  iter {rec.iteration:2d}  bs {rec.bs_id:2d}  new price {rec.mu_after:.4f}"
          f"  projected potential {rec.potential_projected:+.4f}")

# The aggregate picture over many seeds (small sample here; the compare
# CLI subcommand runs the full hundred).
result = compare_algorithms(num_clients=20, num_bss=10, seeds=5)
print("\nover 5 seeds: mean step ratio {:.2f}, mean message ratio {:.2f}".format(
    result.mean_step_ratio, result.mean_message_ratio))
