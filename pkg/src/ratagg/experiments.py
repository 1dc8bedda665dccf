"""Seeded experiment drivers: convergence sweeps and baseline comparisons.

These reproduce the desk-scale studies behind the acceptance tests: how the
step count of the water-filling dynamics scales with network shape, and how
the price-based baseline compares on steps and message overhead when both are
driven to 95% of the equilibrium potential. Seed s drives both the topology
draw and the run, so every row is reproducible in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .afra import Policy, RunResult, SimConfig, run_afra
from .ddnum import DEFAULT_GAMMA_GRID, DdnumConfig, TARGET_FRACTION, run_ddnum, tune_gamma
from .errors import NoFeasibleGamma
from .scenarios import ScenarioParams, generate_random

# Step sizes above ~0.5 swing the prices so hard that a transient projection
# can brush the target long before the prices settle, which makes "steps to
# target" measure luck rather than convergence. The head-to-head comparison
# therefore tunes over the stable lower range of the default grid.
COMPARISON_GAMMA_GRID = tuple(g for g in DEFAULT_GAMMA_GRID if g <= 0.5)


def afra_run_for_seed(
    num_clients: int,
    num_bss: int,
    seed: int,
    epsilon: float = 0.05,
    policy: Policy = Policy.RANDOM_SEQUENTIAL,
    max_steps: int = 10_000,
) -> RunResult:
    topo = generate_random(ScenarioParams(num_clients=num_clients, num_bss=num_bss, seed=seed))
    config = SimConfig(epsilon=epsilon, policy=policy, seed=seed, max_steps=max_steps)
    return run_afra(topo, config)


@dataclass(frozen=True)
class SweepCell:
    num_clients: int
    num_bss: int
    seeds: int
    mean_steps: float
    std_steps: float
    mean_messages: float
    std_messages: float


def convergence_sweep(
    client_counts,
    bs_counts,
    seeds: int,
    epsilon: float = 0.05,
    policy: Policy = Policy.RANDOM_SEQUENTIAL,
) -> list[SweepCell]:
    """Mean steps-to-equilibrium per (N, M) cell over seeds 0..seeds-1."""
    cells = []
    for m in bs_counts:
        for n in client_counts:
            steps = np.empty(seeds)
            messages = np.empty(seeds)
            for s in range(seeds):
                result = afra_run_for_seed(n, m, s, epsilon=epsilon, policy=policy)
                steps[s] = result.summary.steps_to_eq
                messages[s] = result.summary.total_messages
            cells.append(
                SweepCell(
                    num_clients=n,
                    num_bss=m,
                    seeds=seeds,
                    mean_steps=float(steps.mean()),
                    std_steps=float(steps.std()),
                    mean_messages=float(messages.mean()),
                    std_messages=float(messages.std()),
                )
            )
    return cells


@dataclass(frozen=True)
class ComparisonRow:
    seed: int
    afra_steps: int
    afra_messages: int
    ddnum_steps: int
    ddnum_messages: int
    gamma: float
    target_reached: bool
    step_ratio: float | None
    message_ratio: float | None


@dataclass(frozen=True)
class ComparisonResult:
    rows: tuple[ComparisonRow, ...]
    mean_step_ratio: float
    mean_message_ratio: float
    target_fraction: float = TARGET_FRACTION

    @property
    def reached_count(self) -> int:
        return sum(1 for row in self.rows if row.target_reached)


def compare_algorithms(
    num_clients: int,
    num_bss: int,
    seeds: int,
    epsilon: float = 0.05,
    max_iterations: int = 5_000,
    grid=COMPARISON_GAMMA_GRID,
) -> ComparisonResult:
    """Water-filling vs. tuned price dynamics, seed by seed.

    Both run on the same topology draw; the price baseline chases 95% of the
    equilibrium potential with its step size tuned per seed. Seeds where no
    grid step size reaches the target stay in the table, flagged, and drop
    out of the ratio means.
    """
    rows = []
    for s in range(seeds):
        topo = generate_random(
            ScenarioParams(num_clients=num_clients, num_bss=num_bss, seed=s)
        )
        afra = run_afra(
            topo, SimConfig(epsilon=epsilon, policy=Policy.RANDOM_SEQUENTIAL, seed=s)
        )
        target = TARGET_FRACTION * afra.summary.final_potential
        try:
            gamma = tune_gamma(topo, target, grid, max_iterations=max_iterations)
        except NoFeasibleGamma:
            rows.append(
                ComparisonRow(
                    seed=s,
                    afra_steps=afra.summary.steps_to_eq,
                    afra_messages=afra.summary.total_messages,
                    ddnum_steps=max_iterations,
                    ddnum_messages=0,
                    gamma=float("nan"),
                    target_reached=False,
                    step_ratio=None,
                    message_ratio=None,
                )
            )
            continue
        ddnum = run_ddnum(
            topo,
            DdnumConfig(
                gamma=gamma,
                target_potential=target,
                max_iterations=max_iterations,
                seed=s,
            ),
        )
        usable = afra.summary.steps_to_eq > 0 and not ddnum.summary.flagged
        rows.append(
            ComparisonRow(
                seed=s,
                afra_steps=afra.summary.steps_to_eq,
                afra_messages=afra.summary.total_messages,
                ddnum_steps=ddnum.summary.steps,
                ddnum_messages=ddnum.summary.total_messages,
                gamma=gamma,
                target_reached=not ddnum.summary.flagged,
                step_ratio=ddnum.summary.steps / afra.summary.steps_to_eq if usable else None,
                message_ratio=(
                    ddnum.summary.total_messages / afra.summary.total_messages
                    if usable and afra.summary.total_messages > 0
                    else None
                ),
            )
        )
    step_ratios = [row.step_ratio for row in rows if row.step_ratio is not None]
    message_ratios = [row.message_ratio for row in rows if row.message_ratio is not None]
    return ComparisonResult(
        rows=tuple(rows),
        mean_step_ratio=float(np.mean(step_ratios)) if step_ratios else float("nan"),
        mean_message_ratio=float(np.mean(message_ratios)) if message_ratios else float("nan"),
    )
