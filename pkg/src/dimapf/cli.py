"""Command-line entry point: ``dimapf <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .constructions import enumerate_t0_extensions, t0_report, transitive_components
from .formats import ParseError, parse_instance, parse_plan, serialize_plan
from .graph import (find_cycle_pair, is_partially_bidirectional_cycle, is_strongly_connected,
                    strongly_connected_components)
from .groups import classify_group, rotation_generators
from .mapf import validate_plan
from .oracle import DEFAULT_STATE_CAP, Reachable, Unreachable, bfs_reachability
from .solver import FAMILIES, STRATEGIES, bench, bench_report, decide, fitted_exponent, plan


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _sizes(text: str) -> list[int]:
    if "-" in text or ".." in text:
        lo, hi = text.replace("..", "-").split("-", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x]


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    d = decide(inst)
    print(f"{d.status.upper()} ({d.branch})")
    print(f"certificate: {d.certificate}")
    if not d.feasible:
        return 1 if d.status == "infeasible" else 0
    p = plan(inst, d, strategy=args.strategy)
    print(f"plan: {len(p)} steps, validated")
    if args.plan_out:
        with open(args.plan_out, "w", encoding="utf-8") as fh:
            fh.write(serialize_plan(p))
    return 0


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    p = parse_plan(_read(args.plan))
    verdict = validate_plan(inst, p)
    print(verdict)
    return 0 if verdict.ok else 1


def cmd_analyze(args) -> int:
    inst = parse_instance(_read(args.instance))
    g = inst.digraph
    rot2 = args.rot2 or inst.rot2
    comps = strongly_connected_components(g)
    print(f"nodes={len(g)} arcs={len(g.arcs)} strongly_connected={str(is_strongly_connected(g)).lower()}")
    for c in comps:
        print(f"scc {{{' '.join(c.nodes)}}}")
    for comp in transitive_components(g, rot2):
        sub = g.subgraph(comp)
        gens = {k: p for k, p in rotation_generators(sub, rot2).items()}
        even = sum(p.is_even() for p in gens.values())
        line = f"component {{{' '.join(comp)}}} generators={len(gens)} even={even} odd={len(gens) - even}"
        if len(comp) > 1 and gens:
            line += f" group={classify_group(sub, gens, rot2)}"
        print(line)
    if is_strongly_connected(g) and len(g) > 1:
        pbc = is_partially_bidirectional_cycle(g)
        if pbc:
            print(f"partially-bidirectional-cycle backward_arcs={len(pbc.backward)}")
        pair = find_cycle_pair(g)
        if pair is not None:
            r, s, t = pair.type
            print(f"cycle-pair type=({r},{s},{t}) a={' '.join(pair.a_path) or '-'} "
                  f"b={' '.join(pair.b_path)} c={' '.join(pair.c_path)}")
    return 0


def cmd_enumerate(args) -> int:
    exts = enumerate_t0_extensions()
    if args.all:
        for i, e in enumerate(exts):
            dup = "-" if e.duplicate_of is None else str(e.duplicate_of)
            path = "->".join((e.head,) + e.ear + (e.tail,))
            print(f"case {i} base={e.base} ear={path} duplicate_of={dup} only_t0={str(e.only_t0).lower()}"
                  .replace(", ", ","))
    for line in t0_report(exts):
        print(line)
    return 0


def cmd_oracle(args) -> int:
    inst = parse_instance(_read(args.instance))
    res = bfs_reachability(inst, args.cap)
    if isinstance(res, Reachable):
        print(f"REACHABLE shortest={len(res.plan)} visited={res.visited}")
        for step in res.plan:
            print(step)
        return 0
    if isinstance(res, Unreachable):
        print(f"UNREACHABLE visited={res.visited}")
        return 1
    print(f"OVERFLOW visited>{args.cap}")
    return 0


def cmd_bench(args) -> int:
    families = FAMILIES if args.family == "all" else [args.family]
    for fam in families:
        rows = bench(fam, _sizes(args.sizes), seed=args.seed, strategy=args.strategy)
        print(f"# family={fam} seed={args.seed} exponent={fitted_exponent(rows):.2f}")
        for line in bench_report(rows):
            print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dimapf", description="Multi-agent pathfinding on directed graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide feasibility and synthesise a plan")
    p.add_argument("instance")
    p.add_argument("--plan-out", help="write the plan to this file")
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a plan against an instance")
    p.add_argument("instance")
    p.add_argument("plan")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="components, cycle pairs and rotation groups")
    p.add_argument("instance")
    p.add_argument("--rot2", choices=("allow", "forbid"))
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("enumerate-t0", help="ear extensions of the two T0 base graphs")
    p.add_argument("--all", action="store_true", help="list all 144 cases")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("oracle", help="breadth-first search over states")
    p.add_argument("instance")
    p.add_argument("--cap", type=int, default=DEFAULT_STATE_CAP)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="plan lengths on generated families")
    p.add_argument("--family", choices=FAMILIES + ("all",), default="all")
    p.add_argument("--sizes", default="5-11", help="range like 5-11 or list like 5,7,9")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategy", choices=STRATEGIES, default="constructive")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
