"""Command-line front end.

Every command prints one JSON report. Exit codes: 2 bad flags, 3 unreadable
or invalid instance, 4 infeasible, 5 instance too large for an oracle.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import adaptive, nonadaptive, oracle, setcover
from .instance import (GraphInstance, InstanceError, KCenterInstance, SetCoverInstance,
                       fingerprint, generate_random_graph, generate_random_setcover,
                       generate_random_tree, load_instance, serialize_instance)
from .tree import all_pairs_distances, build_rooted_tree, candidate_radii

SCHEMA_VERSION = 1

EXIT_USAGE, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_GUARD = 2, 3, 4, 5


class UsageError(Exception):
    pass


@dataclass
class SolveReport:
    command: list
    fingerprint: str | None
    result: dict
    trace: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1)

    @classmethod
    def from_json(cls, text: str) -> "SolveReport":
        return cls(**json.loads(text))


def _parse_ints(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _rho(text):
    val = float(text)
    if not 0 < val <= 1:
        raise argparse.ArgumentTypeError("rho must be in (0, 1]")
    return val


def _law(text):
    name, *args = text.split(":")
    return (name, *[float(a) for a in args])


def _load(path, kind):
    inst = load_instance(path)
    if not isinstance(inst, kind):
        raise InstanceError(f"{path}: expected a {kind.__name__}, got {type(inst).__name__}")
    return inst


# -- commands ----------------------------------------------------------------

def cmd_solve_kcenter(args) -> SolveReport:
    inst = _load(args.instance, KCenterInstance)
    t0 = time.perf_counter()
    if args.radius is not None:
        tree = build_rooted_tree(inst)
        dist = all_pairs_distances(tree)
        if args.mode == "nonadaptive":
            value, table = nonadaptive.max_success_probability(
                tree, dist, inst.probs, args.k, args.radius)
            centers = nonadaptive.reconstruct_centers(table, tree, dist, inst.probs)
            result = {"radius": args.radius, "centers": sorted(centers),
                      "success_probability": value}
        else:
            fail = adaptive.failure_probability(tree, dist, inst.probs, args.k, args.radius)
            result = {"radius": args.radius, "failure_probability": fail}
        trace = []
    else:
        if args.rho is None:
            raise UsageError("--rho is required unless --radius is given")
        if args.mode == "nonadaptive":
            sol = nonadaptive.solve_nonadaptive(inst, args.k, args.rho)
            result = {"radius": sol.radius, "centers": sorted(sol.centers),
                      "success_probability": sol.success_probability}
        else:
            sol = adaptive.solve_adaptive_var(inst, args.k, args.rho)
            result = {"radius": sol.radius, "failure_probability": sol.failure_probability}
        trace = [list(t) for t in sol.trace]
    result = {"mode": args.mode, "k": args.k, "rho": args.rho, **result}
    return SolveReport(args.argv, fingerprint(inst), result, trace,
                       {"solve_s": time.perf_counter() - t0})


def cmd_solve_setcover(args) -> SolveReport:
    inst = _load(args.instance, SetCoverInstance)
    t0 = time.perf_counter()
    sol = setcover.solve_chance_setcover(inst, args.rho)
    result = {"rho": args.rho, "sets": list(sol.chosen), "cost": sol.cost,
              "uncovered": list(sol.uncovered),
              "violation_probability": sol.violation_probability}
    timings = {"solve_s": time.perf_counter() - t0}
    if args.oracle:
        t1 = time.perf_counter()
        best, chosen = oracle.brute_force_setcover_opt(inst, args.rho)
        result["optimum_cost"] = best
        result["optimum_sets"] = sorted(chosen)
        result["ratio"] = sol.cost / best if best > 0 else (1.0 if sol.cost == 0 else math.inf)
        result["ratio_bound"] = math.log(max(inst.n, 1)) + 1.0
        timings["oracle_s"] = time.perf_counter() - t1
    return SolveReport(args.argv, fingerprint(inst), result, [], timings)


def cmd_verify(args) -> SolveReport:
    t0 = time.perf_counter()
    if args.mode == "hardness":
        g = _load(args.instance, GraphInstance)
        rep = oracle.verify_hardness_sandwich(g)
        result = {"mode": "hardness", **asdict(rep), "n_counts": list(rep.n_counts),
                  "identity_holds": rep.n_counts[rep.m] == rep.I,
                  "sandwich_holds": rep.holds}
        return SolveReport(args.argv, fingerprint(g), result, [],
                           {"verify_s": time.perf_counter() - t0})

    inst = _load(args.instance, KCenterInstance)
    if args.k is None:
        raise UsageError("--k is required for k-center verification")
    tree = build_rooted_tree(inst)
    dist = all_pairs_distances(tree)
    radii = [args.radius] if args.radius is not None else candidate_radii(dist).tolist()
    rows = []
    for r in radii:
        if args.mode == "nonadaptive":
            dp = nonadaptive.max_success_probability(tree, dist, inst.probs, args.k, r)[0]
            ref = oracle.brute_force_nonadaptive_opt(dist, inst.probs, args.k, r)[0]
        else:
            dp = adaptive.failure_probability(tree, dist, inst.probs, args.k, r)
            ref = oracle.brute_force_adaptive_failure(dist, inst.probs, args.k, r)
        row = {"radius": r, "dp": dp, "oracle": ref, "abs_diff": abs(dp - ref)}
        if args.mode == "adaptive" and args.samples:
            est, se = oracle.monte_carlo_failure(inst, args.k, r, args.samples, args.seed)
            row.update(mc_estimate=est, mc_stderr=se)
        rows.append(row)
    result = {"mode": args.mode, "k": args.k,
              "max_abs_diff": max(row["abs_diff"] for row in rows), "rows": rows}
    return SolveReport(args.argv, fingerprint(inst), result, [],
                       {"verify_s": time.perf_counter() - t0})


def cmd_gen(args) -> str:
    if args.n < 1:
        raise UsageError("--n must be positive")
    if args.type == "tree":
        inst = generate_random_tree(args.n, args.seed, args.prob_law or ("uniform", 0.0, 1.0),
                                    args.weight_law or ("randint", 1, 10))
    elif args.type == "setcover":
        inst = generate_random_setcover(args.n, args.m or args.n, args.seed,
                                        args.prob_law or ("uniform", 0.0, 0.6))
    else:
        inst = generate_random_graph(args.n, args.seed)
    return serialize_instance(inst)


def cmd_bench(args) -> SolveReport:
    """Wall-clock of complete solves (metric, radius search, DP) per (n, k) cell."""
    sizes, ks = args.sizes, args.k
    if not sizes or not ks:
        raise UsageError("--sizes and --k need at least one value")
    solve = (nonadaptive.solve_nonadaptive if args.suite == "nonadaptive"
             else adaptive.solve_adaptive_var)
    cells = []
    exponents = {}
    for k in ks:
        times = []
        for n in sizes:
            inst = generate_random_tree(n, args.seed)
            t0 = time.perf_counter()
            solve(inst, k, args.rho)
            times.append(time.perf_counter() - t0)
            cells.append({"n": n, "k": k, "seconds": times[-1]})
        if len(sizes) >= 2:
            exponents[str(k)] = growth_exponent(sizes, times)
    result = {"suite": args.suite, "sizes": sizes, "k": ks, "rho": args.rho,
              "growth_exponent_n": exponents}
    return SolveReport(args.argv, None, result, [], {"cells": cells})


def growth_exponent(sizes, seconds) -> float:
    """Least-squares slope of log(time) against log(n)."""
    return float(np.polyfit(np.log(sizes), np.log(seconds), 1)[0])


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stochcover",
                                 description="Chance-constrained covering solvers and oracles.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-kcenter", help="stochastic k-center on a tree")
    p.add_argument("--instance", required=True)
    p.add_argument("--mode", choices=["nonadaptive", "adaptive"], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--rho", type=_rho)
    p.add_argument("--radius", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve_kcenter)

    p = sub.add_parser("solve-setcover", help="chance-constrained set cover")
    p.add_argument("--instance", required=True)
    p.add_argument("--rho", type=_rho, required=True)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve_setcover)

    p = sub.add_parser("verify", help="compare solvers with exhaustive oracles")
    p.add_argument("--instance", required=True)
    p.add_argument("--mode", choices=["nonadaptive", "adaptive", "hardness"], required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--radius", type=float)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a random instance document")
    p.add_argument("--type", choices=["tree", "setcover", "graph"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--prob-law", type=_law, help="e.g. uniform:0:1 or const:0.5")
    p.add_argument("--weight-law", type=_law, help="e.g. randint:1:10")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time the dynamic programs")
    p.add_argument("--suite", choices=["nonadaptive", "adaptive"], required=True)
    p.add_argument("--sizes", type=_parse_ints, required=True)
    p.add_argument("--k", type=_parse_ints, default=[3])
    p.add_argument("--rho", type=_rho, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)   # exits 2 on bad flags
    args.argv = list(sys.argv[1:] if argv is None else argv)
    try:
        out = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InstanceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except oracle.SizeGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (nonadaptive.InfeasibleError, adaptive.InfeasibleError,
            setcover.InfeasibleError, oracle.InfeasibleError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = out if isinstance(out, str) else out.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
