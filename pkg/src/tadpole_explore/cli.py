"""Command line entry point: ``python -m tadpole_explore <subcommand>``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .adversary import adversary_game
from .advice import AdviceMismatch, advise, explore_with_advice
from .explorers import make_policy, run_policy
from .fog_env import ExplorationError, new_session, trace_to_csv
from .graph_core import GraphError, load_graph
from .harness import ConfigError, ExperimentIOError, decimal, exact, load_config, rows_to_csv, run_experiment
from .optimal_oracle import MAX_BRUTE_FORCE_N, brute_force_opt, optimal_cost


def _graph(path: str):
    try:
        return load_graph(path)
    except OSError as exc:
        raise ExperimentIOError(f"{path}: {exc.strerror or exc}") from None


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    rows = run_experiment(cfg)
    if cfg.output is None:
        sys.stdout.write(rows_to_csv(rows))
    failures = [r for r in rows if not r.passed]
    worst = max(rows, key=lambda r: r.ratio)
    print(
        f"{cfg.mode}: {len(rows)} rows, {len(failures)} failed, max ratio {decimal(worst.ratio)}"
        + (f", csv at {cfg.output}" if cfg.output else ""),
        file=sys.stderr,
    )
    return 1 if failures else 0


def cmd_oracle(args) -> int:
    g = _graph(args.graph)
    opt = optimal_cost(g)
    brute = exact(brute_force_opt(g)) if g.n <= MAX_BRUTE_FORCE_N else "skipped"
    print("opt_closed_form,opt_brute_force,shape")
    print(f"{exact(opt.cost)},{brute},{opt.shape}")
    return 0 if brute in ("skipped", exact(opt.cost)) else 1


def cmd_adversary(args) -> int:
    result = adversary_game(args.explorer, args.k)
    print("explorer,k,case,t1,aux,explorer_cost,opt_cost,ratio,bound")
    print(
        f"{result.explorer},{result.k},{result.case},{result.t1},{result.aux},"
        f"{exact(result.explorer_cost)},{exact(result.opt_cost)},{exact(result.ratio)},{exact(result.bound)}"
    )
    return 0 if result.ratio >= result.bound else 1


def cmd_advice(args) -> int:
    g = _graph(args.graph)
    bits = advise(args.scheme, g, args.start)
    tour = explore_with_advice(args.scheme, new_session(g, args.start), bits)
    opt = optimal_cost(g).cost
    print("n,bits,advice,cost,opt,ratio")
    print(f"{g.n},{len(bits)},{bits},{exact(tour.total_cost)},{exact(opt)},{exact(tour.total_cost / opt)}")
    return 0


def cmd_explore(args) -> int:
    g = _graph(args.graph)
    session = new_session(g, args.start)
    tour = run_policy(session, make_policy(args.explorer, g, args.start))
    opt = optimal_cost(g).cost
    print("explorer,start,cost,opt,ratio")
    print(f"{args.explorer},{args.start},{exact(tour.total_cost)},{exact(opt)},{exact(tour.total_cost / opt)}")
    if args.trace == "-":
        sys.stdout.write(trace_to_csv(session.trace))
    elif args.trace:
        Path(args.trace).write_text(trace_to_csv(session.trace))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tadpole-explore", description="Online exploration of cycles and tadpoles.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment config; exits 1 if any row fails")
    p.add_argument("config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="closed-form and brute-force optimum of a graph file")
    p.add_argument("graph")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("adversary", help="play the lower-bound game against an explorer")
    p.add_argument("--explorer", default="greedy", help="greedy, dfs or random:<seed>")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("advice", help="write advice for a graph and explore with it")
    p.add_argument("--scheme", choices=["2bit", "cycle", "tadpole"], required=True)
    p.add_argument("graph")
    p.add_argument("--start", type=int, required=True)
    p.set_defaults(func=cmd_advice)

    p = sub.add_parser("explore", help="run one explorer on a graph file")
    p.add_argument("--explorer", default="greedy", help="greedy, dfs, random:<seed> or advice:<scheme>")
    p.add_argument("graph")
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--trace", metavar="PATH", help="write the move trace as CSV ('-' for stdout)")
    p.set_defaults(func=cmd_explore)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, ConfigError, ExperimentIOError, ExplorationError, AdviceMismatch, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
