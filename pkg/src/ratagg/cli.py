"""Command-line experiment runner.

Subcommands mirror the library surface: generate topologies, run either
dynamics on a topology file, tune the price step size, and reproduce the
comparison and sweep studies. All file outputs are byte-deterministic for a
given invocation, so reruns can be diffed.

Exit codes: 0 success, 2 bad configuration, 3 topology rejected, 4 no step
size in the tuning grid reached the target.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .afra import Policy, SimConfig, run_afra
from .ddnum import (
    DEFAULT_GAMMA_GRID,
    DdnumConfig,
    TARGET_FRACTION,
    run_ddnum,
    tune_gamma,
)
from .errors import NoFeasibleGamma, TopologyError
from .experiments import compare_algorithms, convergence_sweep
from .fileio import (
    load_topology,
    save_topology,
    summary_text,
    write_afra_trace,
    write_ddnum_trace,
    write_summary,
)
from .model import Topology
from .oracle import (
    check_equilibrium_properties,
    convergence_step_bound,
    solve_global_pf,
    verify_uniqueness,
)
from .scenarios import ScenarioParams, generate_random

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TOPOLOGY = 3
EXIT_NO_GAMMA = 4


def _gamma_arg(text: str):
    if text == "auto":
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"gamma must be a number or 'auto', got {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("gamma must be positive")
    return value


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _property_doc(report) -> dict:
    return {
        "prop_i_residual": report.prop_i_residual,
        "prop_i_pass": report.prop_i_pass,
        "prop_ii_residual": report.prop_ii_residual,
        "prop_ii_pass": report.prop_ii_pass,
        "prop_iii_residual": report.prop_iii_residual,
        "prop_iii_pass": report.prop_iii_pass,
        "optimality_gap": report.optimality_gap,
        "optimality_pass": report.optimality_pass,
        "tol": report.tol,
        "tol_scaled": report.tol_scaled,
        "all_pass": report.all_pass,
    }


def _run_summary_doc(summary, thm2_bound, property_report, steps=None) -> dict:
    return {
        "steps_to_eq": summary.steps_to_eq if steps is None else steps,
        "flagged": summary.flagged,
        "final_potential": summary.final_potential,
        "pf_index": summary.pf_index,
        "total_messages": summary.total_messages,
        "per_client_throughput": summary.throughput,
        "per_bs_theta": summary.theta,
        "thm2_bound": thm2_bound,
        "property_report": property_report,
    }


def _emit(doc: dict, path: str | None) -> None:
    if path:
        write_summary(doc, path)
    print(summary_text(doc))


def _load(path: str) -> Topology:
    if not Path(path).exists():
        raise ValueError(f"topology file {path} does not exist")
    return load_topology(path)


def _cmd_gen(args) -> int:
    params = ScenarioParams(
        num_clients=args.clients,
        num_bss=args.bss,
        rats_per_client=args.rats,
        seed=args.seed,
    )
    topo = generate_random(params)
    save_topology(topo, args.out)
    print(f"wrote {args.clients}x{args.bss} topology (seed {args.seed}) to {args.out}")
    return EXIT_OK


def _cmd_run_afra(args) -> int:
    topo = _load(args.topo)
    config = SimConfig(
        epsilon=args.epsilon, policy=args.policy, seed=args.seed, max_steps=args.max_steps
    )
    result = run_afra(topo, config)
    if args.trace:
        write_afra_trace(result.trace, args.trace)
    report = check_equilibrium_properties(
        topo, result.state.allocation, epsilon=args.epsilon, compute_global=False
    )
    doc = _run_summary_doc(
        result.summary,
        thm2_bound=convergence_step_bound(topo, args.epsilon),
        property_report=_property_doc(report),
    )
    _emit(doc, args.summary)
    return EXIT_OK


def _ddnum_target(topo, args) -> float:
    afra = run_afra(
        topo,
        SimConfig(epsilon=args.epsilon, policy=Policy.RANDOM_SEQUENTIAL, seed=args.seed),
    )
    return TARGET_FRACTION * afra.summary.final_potential


def _cmd_run_ddnum(args) -> int:
    topo = _load(args.topo)
    target = _ddnum_target(topo, args)
    config = DdnumConfig(
        gamma=args.gamma,
        target_potential=target,
        max_iterations=args.max_steps,
        seed=args.seed,
    )
    result = run_ddnum(topo, config)
    if args.trace:
        write_ddnum_trace(result.trace, args.trace)
    report = check_equilibrium_properties(
        topo, result.allocation, epsilon=0.0, compute_global=False
    )
    doc = _run_summary_doc(
        result.summary,
        thm2_bound=None,
        property_report=_property_doc(report),
        steps=result.summary.steps,
    )
    doc["gamma"] = result.summary.gamma
    doc["target_potential"] = result.summary.target_potential
    _emit(doc, args.summary)
    return EXIT_OK


def _cmd_tune_gamma(args) -> int:
    topo = _load(args.topo)
    target = _ddnum_target(topo, args)
    gamma = tune_gamma(topo, target, max_iterations=args.max_steps)
    doc = {
        "gamma": gamma,
        "target_potential": target,
        "grid": list(DEFAULT_GAMMA_GRID),
        "max_iterations": args.max_steps,
    }
    _emit(doc, args.summary)
    return EXIT_OK


def _cmd_compare(args) -> int:
    result = compare_algorithms(
        num_clients=args.clients,
        num_bss=args.bss,
        seeds=args.seeds,
        epsilon=args.epsilon,
        max_iterations=args.max_steps,
    )
    if args.out:
        lines = [
            "seed,afra_steps,afra_messages,ddnum_steps,ddnum_messages,"
            "gamma,target_reached,step_ratio,message_ratio"
        ]
        for row in result.rows:
            ratio = "" if row.step_ratio is None else f"{row.step_ratio:.12g}"
            mratio = "" if row.message_ratio is None else f"{row.message_ratio:.12g}"
            lines.append(
                f"{row.seed},{row.afra_steps},{row.afra_messages},"
                f"{row.ddnum_steps},{row.ddnum_messages},{row.gamma:.12g},"
                f"{str(row.target_reached).lower()},{ratio},{mratio}"
            )
        Path(args.out).write_text("\n".join(lines) + "\n")
    doc = {
        "num_clients": args.clients,
        "num_bss": args.bss,
        "seeds": args.seeds,
        "target_fraction": result.target_fraction,
        "reached_count": result.reached_count,
        "mean_step_ratio": result.mean_step_ratio,
        "mean_message_ratio": result.mean_message_ratio,
    }
    _emit(doc, args.summary)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cells = convergence_sweep(
        client_counts=args.clients,
        bs_counts=args.bss,
        seeds=args.seeds,
        epsilon=args.epsilon,
        policy=args.policy,
    )
    lines = ["num_clients,num_bss,seeds,mean_steps,std_steps,mean_messages,std_messages"]
    for cell in cells:
        lines.append(
            f"{cell.num_clients},{cell.num_bss},{cell.seeds},"
            f"{cell.mean_steps:.12g},{cell.std_steps:.12g},"
            f"{cell.mean_messages:.12g},{cell.std_messages:.12g}"
        )
    table = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(table)
    print(table, end="")
    return EXIT_OK


def _cmd_verify(args) -> int:
    topo = _load(args.topo)
    runs = [
        run_afra(
            topo,
            SimConfig(
                epsilon=args.epsilon, policy=args.policy, seed=s, max_steps=args.max_steps
            ),
        )
        for s in range(args.seed, args.seed + args.seeds)
    ]
    reference = runs[0]
    oracle = solve_global_pf(topo)
    report = check_equilibrium_properties(
        topo,
        reference.state.allocation,
        epsilon=args.epsilon,
        global_solution=oracle,
    )
    doc = _run_summary_doc(
        reference.summary,
        thm2_bound=convergence_step_bound(topo, args.epsilon),
        property_report=_property_doc(report),
    )
    if len(runs) > 1:
        tol_r = 10.0 * args.epsilon * float(np.max(topo.rates))
        uniq = verify_uniqueness(topo, [r.state for r in runs], tol=tol_r)
        doc["uniqueness"] = {
            "passed": uniq.passed,
            "max_throughput_deviation": uniq.max_throughput_deviation,
            "lambdas_differ": uniq.lambdas_differ,
            "max_lambda_deviation": uniq.max_lambda_deviation,
            "tol": uniq.tol,
            "seeds": args.seeds,
        }
    doc["global_objective"] = oracle.objective
    _emit(doc, args.summary)
    return EXIT_OK


def _add_common_run_flags(sub, with_policy: bool) -> None:
    sub.add_argument("--topo", required=True, help="topology JSON file")
    sub.add_argument("--epsilon", type=float, default=0.05, help="update gate (default 0.05)")
    if with_policy:
        sub.add_argument(
            "--policy",
            choices=["random", "priority"],
            default="random",
            help="BS activation policy",
        )
    sub.add_argument("--seed", type=int, default=0, help="run seed")
    sub.add_argument("--summary", help="write the run summary JSON here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratagg",
        description="Proportional-fair multi-RAT aggregation: water-filling "
        "dynamics, price-based baseline, and optimality checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random topology file")
    gen.add_argument("--clients", type=int, required=True)
    gen.add_argument("--bss", type=int, required=True)
    gen.add_argument("--rats", type=int, default=4, help="RATs per client (default 4)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="output topology path")
    gen.set_defaults(func=_cmd_gen)

    afra = sub.add_parser("run-afra", help="run the water-filling dynamics")
    _add_common_run_flags(afra, with_policy=True)
    afra.add_argument("--max-steps", type=int, default=10_000)
    afra.add_argument("--trace", help="write the per-step trace here")
    afra.set_defaults(func=_cmd_run_afra)

    ddnum = sub.add_parser("run-ddnum", help="run the price-based baseline")
    _add_common_run_flags(ddnum, with_policy=False)
    ddnum.add_argument(
        "--gamma",
        type=_gamma_arg,
        default=None,
        help="price step size, or 'auto' to tune (default auto)",
    )
    ddnum.add_argument("--max-steps", type=int, default=5_000)
    ddnum.add_argument("--trace", help="write the per-iteration trace here")
    ddnum.set_defaults(func=_cmd_run_ddnum)

    tune = sub.add_parser("tune-gamma", help="grid-search the price step size")
    _add_common_run_flags(tune, with_policy=False)
    tune.add_argument("--max-steps", type=int, default=5_000)
    tune.set_defaults(func=_cmd_tune_gamma)

    compare = sub.add_parser("compare", help="water-filling vs. tuned price baseline")
    compare.add_argument("--clients", type=int, default=50)
    compare.add_argument("--bss", type=int, default=10)
    compare.add_argument("--seeds", type=int, default=100)
    compare.add_argument("--epsilon", type=float, default=0.05)
    compare.add_argument("--max-steps", type=int, default=5_000)
    compare.add_argument("--out", help="write the per-seed table here")
    compare.add_argument("--summary", help="write the aggregate summary JSON here")
    compare.set_defaults(func=_cmd_compare)

    sweep = sub.add_parser("sweep", help="convergence steps over a (clients, BSs) grid")
    sweep.add_argument(
        "--clients",
        type=_int_list,
        default=[10, 20, 30, 40, 50, 60, 70, 80, 90, 100],
        help="comma-separated client counts",
    )
    sweep.add_argument(
        "--bss", type=_int_list, default=[10, 20, 50], help="comma-separated BS counts"
    )
    sweep.add_argument("--seeds", type=int, default=100)
    sweep.add_argument("--epsilon", type=float, default=0.05)
    sweep.add_argument(
        "--policy", choices=["random", "priority"], default="random"
    )
    sweep.add_argument("--out", help="write the table here")
    sweep.set_defaults(func=_cmd_sweep)

    verify = sub.add_parser(
        "verify", help="check the equilibrium identities and global optimality"
    )
    _add_common_run_flags(verify, with_policy=True)
    verify.add_argument("--seeds", type=int, default=5, help="independent runs to compare")
    verify.add_argument("--max-steps", type=int, default=10_000)
    verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TopologyError as exc:
        print(f"topology error: {exc}", file=sys.stderr)
        return EXIT_TOPOLOGY
    except NoFeasibleGamma as exc:
        print(f"no feasible gamma: {exc}", file=sys.stderr)
        return EXIT_NO_GAMMA
    except (ValueError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
