"""Command-line front end: run scenarios, print stability bounds, validate configs."""

from __future__ import annotations

import argparse
import sys

from . import graph, scenario, spectral


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _cmd_run(args) -> int:
    path = scenario.resolve_scenario_path(args.config)
    cfg = scenario.load_scenario(path)
    result = scenario.run_scenario(cfg, out_dir=args.out, quiet=args.quiet)
    if not args.quiet:
        print(f"wrote {len(result.files)} files to {result.out_dir}")
    return 0


def _cmd_bound(args) -> int:
    g = graph.load_graph(args.graph)
    sys_ = graph.build_pinned_system(g)
    summary = spectral.summarize(sys_.K)
    print(f"n = {sys_.n}")
    print("eigenvalues (re, im), sorted:")
    for lam in summary.eigenvalues:
        print(f"  {_fmt(lam.real)} {_fmt(lam.imag)}")
    print(f"gain_bound = {_fmt(summary.gain_bound)}")
    return 0


def _cmd_validate(args) -> int:
    path = scenario.resolve_scenario_path(args.config)
    cfg = scenario.load_scenario(path)
    graph.build_pinned_system(cfg.graph)  # checks source connectivity
    if not args.quiet:
        print(f"{path}: OK ({len(cfg.runs)} run(s), {cfg.graph.n_agents} agents)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsrsim",
        description="Simulate pinned-network consensus with and without "
        "delayed-self-reinforcement acceleration.",
    )
    parser.add_argument("--quiet", action="store_true", help="suppress informational output")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_quiet(p):
        # accepted after the subcommand too; SUPPRESS keeps the top-level value
        p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                       help="suppress informational output")

    p_run = sub.add_parser("run", help="execute a scenario config and emit CSV outputs")
    p_run.add_argument("config", help="scenario file path or bundled scenario name")
    p_run.add_argument("--out", default=None, help="output directory (overrides the config)")
    add_quiet(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_bound = sub.add_parser("bound", help="print the stability gain bound and spectrum of a graph")
    p_bound.add_argument("graph", help="edge-list graph file")
    add_quiet(p_bound)
    p_bound.set_defaults(func=_cmd_bound)

    p_val = sub.add_parser("validate", help="check a scenario config without running it")
    p_val.add_argument("config", help="scenario file path or bundled scenario name")
    add_quiet(p_val)
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (scenario.ScenarioError, graph.GraphValidationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
