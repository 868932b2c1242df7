"""Command-line interface.

Verbs: gen (sample an instance), harvest (collect covers), distinguish
(decide one instance from a covers file), run (full experiment with paired
trials), feasibility (parameter wiring report), oracle (cross-check the
implicit graph queries against materialized truth).

Exit codes: 0 success, 2 infeasible parameters, 3 harvest failure, 4 invalid
configuration.  The EVENCOVER_SEED environment variable, when set, overrides
any --seed flag; no other setting can come from the environment.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .distinguish import DistinguisherConfig, distinguish
from .errors import CapacityError, EvenCoverError, InsufficientCoversError
from .harness import ExperimentConfig, check_feasibility, run_experiment, write_trials_csv
from .hypergraph import hypergraph_from_dict
from .instances import (
    RngStream,
    instance_from_dict,
    instance_to_dict,
    sample_null_signs,
    sample_planted_signs,
    sample_uniform_hypergraph,
)
from .kikuchi import KikuchiGraph, compute_params
from .oracles import kikuchi_equivalence_suite
from .walks import WalkSearchConfig, harvest_distinct_covers, load_covers, save_covers

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_HARVEST = 3
EXIT_INVALID = 4

SEED_ENV_VAR = "EVENCOVER_SEED"


def _threshold_arg(text: str):
    if text == "half-planted-mean":
        return text
    try:
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            "threshold must be a number or 'half-planted-mean'"
        ) from exc


def _effective_seed(args) -> int:
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from exc
    return args.seed


def _add_shape_args(p: argparse.ArgumentParser, require: bool = True):
    p.add_argument("--n", type=int, required=require, help="number of variables")
    p.add_argument("--k", type=int, required=require, help="edge arity (even)")
    group = p.add_mutually_exclusive_group(required=require)
    group.add_argument("--m", type=int, help="number of hyperedges")
    group.add_argument(
        "--density", type=float,
        help="edge density delta'; m = ceil(density * n^(k/2) * log2 n)",
    )


def _edge_count(args) -> int:
    if args.m is not None:
        return args.m
    return int(math.ceil(args.density * args.n ** (args.k / 2.0) * math.log2(args.n)))


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_hypergraph_or_instance(path: str):
    data = _load_json(path)
    if "signs" in data:
        return instance_from_dict(data)
    return hypergraph_from_dict(data)


def _cmd_gen(args) -> int:
    seed = _effective_seed(args)
    root = RngStream(seed)
    h = sample_uniform_hypergraph(args.n, args.k, _edge_count(args), root.child("hypergraph"))
    if args.label == "null":
        inst = sample_null_signs(h, root.child("signs"))
    else:
        z = (root.child("z").generator().integers(0, 2, size=h.n) * 2 - 1).astype(np.int8)
        inst = sample_planted_signs(h, z, args.rho, root.child("signs"))
    payload = instance_to_dict(inst)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(f"wrote {args.label} instance (n={h.n}, k={h.k}, m={h.m}) to {args.out}")
    return EXIT_OK


def _cmd_harvest(args) -> int:
    seed = _effective_seed(args)
    obj = _load_hypergraph_or_instance(args.instance)
    h = obj if not hasattr(obj, "hypergraph") else obj.hypergraph
    cfg = WalkSearchConfig(
        T=args.T, beta=args.beta, c1=args.c1, L=args.L, R=args.R,
        target_covers=args.target_covers, epsilon=args.epsilon, delta=args.delta,
        profile=args.profile,
    )
    graph = KikuchiGraph(h, args.ell)
    try:
        result = harvest_distinct_covers(graph, cfg, RngStream(seed).child("harvest"))
    except InsufficientCoversError as exc:
        print(
            f"harvest failed: {exc} (partial covers: {len(exc.covers)})",
            file=sys.stderr,
        )
        return EXIT_HARVEST
    save_covers(result.covers, result.T, seed, args.out)
    print(
        f"wrote {len(result.covers)} covers to {args.out} "
        f"({result.iterations} iterations, {result.collisions} collisions)"
    )
    return EXIT_OK


def _cmd_distinguish(args) -> int:
    seed = _effective_seed(args)
    inst = _load_hypergraph_or_instance(args.instance)
    if not hasattr(inst, "signs"):
        raise ValueError("distinguish needs an instance file with signs")
    covers, T, _ = load_covers(args.covers)
    params = compute_params(inst.hypergraph, args.ell)
    cfg = DistinguisherConfig(
        T=T, rho=args.rho, epsilon=args.epsilon, delta=args.delta,
        parts=args.parts, S=args.S, shatter_floor=args.shatter_floor,
        threshold=args.threshold, c_anti=args.c_anti, repeats=args.repeats,
        profile=args.profile,
    )
    report = distinguish(covers, inst, cfg.resolve(params.N), RngStream(seed).child("decide"))
    payload = {
        "decision": report.decision,
        "statistic": report.statistic,
        "threshold": report.threshold,
        "votes": list(report.votes),
        "n_selected": report.n_selected,
        "selection_attempts": report.selection_attempts,
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    print(report.decision)
    return EXIT_OK


def _cmd_run(args) -> int:
    if args.config:
        data = _load_json(args.config)
        if args.seed is not None:
            data["seed"] = args.seed
        cfg = ExperimentConfig.from_dict(data)
    else:
        required = [name for name in ("n", "k", "ell") if getattr(args, name) is None]
        if required:
            raise ValueError(f"missing required flags without --config: {required}")
        cfg = ExperimentConfig(
            n=args.n, k=args.k, ell=args.ell, rho=args.rho,
            seed=args.seed if args.seed is not None else 0,
            trials=args.trials, m=args.m, density=args.density,
            instance_path=args.instance, profile=args.profile, T=args.T,
            beta=args.beta, c1=args.c1, L=args.L, R=args.R,
            target_covers=args.target_covers, parts=args.parts, S=args.S,
            shatter_floor=args.shatter_floor, threshold=args.threshold,
            epsilon=args.epsilon, delta=args.delta, c_anti=args.c_anti,
            repeats=args.repeats,
        )
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), "seed": int(env)})
    report = run_experiment(cfg)
    if args.out_report:
        with open(args.out_report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.out_csv:
        write_trials_csv(report, args.out_csv)
    status = report["status"]
    if status == "ok":
        agg = report["aggregate"]
        print(
            f"status ok: accuracy {agg['accuracy']:.3f} "
            f"({agg['correct']}/{agg['decisions']} decisions), digest {report['digest'][:12]}"
        )
        return EXIT_OK
    print(f"status {status}", file=sys.stderr)
    if status == "infeasible":
        for note in report["feasibility"]["notes"]:
            print(f"  note: {note}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_HARVEST


def _cmd_feasibility(args) -> int:
    cfg = ExperimentConfig(
        n=args.n, k=args.k, ell=args.ell, rho=args.rho, seed=0, trials=0,
        m=args.m, density=args.density, profile=args.profile, T=args.T,
        delta=args.delta, c_anti=args.c_anti, epsilon=args.epsilon,
    )
    print(json.dumps(check_feasibility(cfg), indent=2, sort_keys=True, default=str))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    seed = _effective_seed(args)
    if args.instance:
        obj = _load_hypergraph_or_instance(args.instance)
        h = obj if not hasattr(obj, "hypergraph") else obj.hypergraph
    else:
        h = sample_uniform_hypergraph(args.n, args.k, _edge_count(args), RngStream(seed).child("hypergraph"))
    results = kikuchi_equivalence_suite(
        h, args.ell, RngStream(seed).child("oracle"), stationary_samples=args.samples
    )
    ok = True
    for res in results:
        print(res.describe())
        ok = ok and res.passed
    return EXIT_OK if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evencover",
        description="Harvest even covers of k-uniform hypergraphs and "
        "distinguish null from planted sign vectors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a hypergraph with signs")
    _add_shape_args(p)
    p.add_argument("--label", choices=["null", "planted"], default="null")
    p.add_argument("--rho", type=float, default=0.5, help="planted signal strength")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output instance JSON path")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("harvest", help="collect distinct even covers via walks")
    p.add_argument("--instance", required=True, help="hypergraph or instance JSON")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--T", type=int, required=True, help="walk length")
    p.add_argument("--beta", type=float, default=0.05)
    p.add_argument("--c1", type=float, default=200.0)
    p.add_argument("--L", type=int, default=None)
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--target-covers", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--profile", choices=["paper", "desk"], default="desk")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output covers JSON path")
    p.set_defaults(func=_cmd_harvest)

    p = sub.add_parser("distinguish", help="decide null vs planted for one instance")
    p.add_argument("--instance", required=True, help="instance JSON with signs")
    p.add_argument("--covers", required=True, help="covers JSON from harvest")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--parts", type=int, default=None)
    p.add_argument("--S", type=int, default=None)
    p.add_argument("--shatter-floor", type=int, default=None)
    p.add_argument("--threshold", type=_threshold_arg, default=None)
    p.add_argument("--c-anti", type=float, default=2.0)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--profile", choices=["paper", "desk"], default="desk")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="optional decision JSON path")
    p.set_defaults(func=_cmd_distinguish)

    p = sub.add_parser("run", help="paired null/planted trials end to end")
    _add_shape_args(p, require=False)
    p.add_argument("--config", default=None, help="JSON file of ExperimentConfig fields")
    p.add_argument("--instance", default=None, help="hypergraph JSON to reuse")
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--profile", choices=["paper", "desk"], default="desk")
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--beta", type=float, default=0.05)
    p.add_argument("--c1", type=float, default=None)
    p.add_argument("--L", type=int, default=None)
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--target-covers", type=int, default=None)
    p.add_argument("--parts", type=int, default=None)
    p.add_argument("--S", type=int, default=None)
    p.add_argument("--shatter-floor", type=int, default=None)
    p.add_argument("--threshold", type=_threshold_arg, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--c-anti", type=float, default=2.0)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-report", default=None)
    p.add_argument("--out-csv", default=None)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("feasibility", help="report parameter wiring and degree gaps")
    _add_shape_args(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--c-anti", type=float, default=2.0)
    p.add_argument("--profile", choices=["paper", "desk"], default="paper")
    p.set_defaults(func=_cmd_feasibility)

    p = sub.add_parser("oracle", help="cross-check implicit queries on a small graph")
    p.add_argument("--instance", default=None, help="hypergraph or instance JSON")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--m", type=int, default=60)
    p.add_argument("--density", type=float, default=None)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InsufficientCoversError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HARVEST
    except (ValueError, CapacityError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except EvenCoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
