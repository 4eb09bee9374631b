"""Command-line entry point: generate | run | oracle | verify | sweep."""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from flexsky import bench, oracles
from flexsky.datagen import MAX_DIM, GenSpec, export_partition, generate, load_dataset_csv, write_dataset_csv
from flexsky.fdominance import PolytopeError, WeightPolytope, load_constraints, polytope_from_epsilon
from flexsky.golden import ex9, golden_cases
from flexsky.model import Dataset, DatasetError, vertical_partition
from flexsky.nra import RunConfig, run
from flexsky.sources import SourceError, open_partition_dir


def _polytope(args, d: int) -> WeightPolytope:
    if getattr(args, "constraints", None):
        W = load_constraints(args.constraints)
        if W.dim != d:
            raise PolytopeError(f"constraint file has dim {W.dim}, data has {d}")
        return W
    return polytope_from_epsilon(d, args.eps)


def _add_polytope_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--eps", default="0.01", help="ratio-bound spread: none | FLOAT in (0,1] | full (default 0.01)")
    g.add_argument("--constraints", help="JSON file {dim, inequalities:[{a,b}], normalize}")


def cmd_generate(args) -> int:
    spec = GenSpec(args.dist, args.n, args.d, args.seed)
    out = Path(args.out)
    if out.exists() and any(out.iterdir()):
        raise FileExistsError(f"{out}: directory is not empty")
    ds = generate(spec)
    export_partition(ds, out, {"distribution": spec.distribution, "seed": spec.seed})
    write_dataset_csv(ds, out / "dataset.csv")
    print(f"wrote {ds.n} tuples x {ds.dim} attributes to {out}")
    return 0


def cmd_run(args) -> int:
    sources, meta = open_partition_dir(args.lists)
    d = len(sources)
    W = _polytope(args, d)
    result = run(sources, RunConfig(args.k, W, meta["attr_max"], args.mu))
    text = result.to_json(indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def cmd_oracle(args) -> int:
    ds = load_dataset_csv(args.dataset, normalize=args.normalize)
    if args.op == "skyline":
        out = oracles.skyline(ds)
    elif args.op == "skyband":
        out = oracles.skyband(ds, args.k)
    elif args.op == "topk":
        weights = [float(x) for x in args.weights.split(",")] if args.weights else [1.0 / ds.dim] * ds.dim
        out = oracles.top_k(ds, weights, args.k)
    elif args.op == "nd":
        out = oracles.nd_k_bruteforce(ds, _polytope(args, ds.dim), args.k)
    else:
        print(json.dumps({"min_stop_depth": oracles.min_stop_depth(ds, _polytope(args, ds.dim), args.k)}))
        return 0
    print(json.dumps({"op": args.op, "size": len(out), "ids": sorted(out)}, indent=2))
    return 0


def _check(ds: Dataset, W: WeightPolytope, k: int, mu: int, offset: int) -> tuple[bool, set, set]:
    got = run(vertical_partition(ds), RunConfig(k, W, ds.attr_max, mu, prune_offset=offset)).id_set
    want = oracles.nd_k_bruteforce(ds, W, k)
    return got == want, got, want


def random_suite(instances: int, max_n: int, seed: int, offset: int = 0):
    """Yield ``(description, ok)`` for randomized engine-vs-oracle instances."""
    rnd = random.Random(seed)
    for i in range(instances):
        dist = rnd.choice(["UNI", "ANT"])
        n = rnd.randint(1, max_n)
        d = rnd.choice([2, 3, 4])
        k = rnd.choice([1, 2, 5])
        eps = rnd.choice(["none", 0.05, 0.2, "full"])
        mu = rnd.choice([1, 10])
        gseed = rnd.getrandbits(63)
        ds = generate(GenSpec(dist, n, d, gseed))
        ok, _, _ = _check(ds, polytope_from_epsilon(d, eps), k, mu, offset)
        yield f"#{i} {dist} n={n} d={d} k={k} eps={eps} mu={mu} seed={gseed}", ok


def cmd_verify(args) -> int:
    failures = 0
    total = 0
    if args.random_suite:
        for desc, ok in random_suite(args.instances, args.max_n, args.seed, args.inject_fault):
            total += 1
            if not ok:
                failures += 1
                print(f"FAIL {desc}")
    elif args.golden or not args.dataset:
        ds = ex9()
        for label, W, k, expected in golden_cases():
            for mu in (1, 3):
                total += 1
                ok, got, want = _check(ds, W, k, mu, args.inject_fault)
                ok = ok and got == expected
                failures += not ok
                print(f"{'PASS' if ok else 'FAIL'} {label} mu={mu} -> {sorted(got)}")
    else:
        ds = load_dataset_csv(args.dataset, normalize=args.normalize)
        ok, got, want = _check(ds, _polytope(args, ds.dim), args.k, args.mu, args.inject_fault)
        total, failures = 1, int(not ok)
        print(f"{'PASS' if ok else 'FAIL'} engine={len(got)} oracle={len(want)} tuples")
    print(f"{total - failures}/{total} instances match")
    return 0 if failures == 0 else 1


def cmd_sweep(args) -> int:
    seeds = [int(s) for s in args.seeds.split(",")]
    if args.spec:
        spec = bench.SweepSpec.from_file(args.spec)
    elif args.preset:
        spec = bench.preset(args.preset, seeds)
    else:
        def axis(raw, conv):
            return [conv(x) for x in raw.split(",")]
        spec = bench.SweepSpec(
            dist=axis(args.dist, str), n=axis(args.n, int), d=axis(args.d, int), k=axis(args.k, int),
            eps=axis(args.eps, str), mu=axis(args.mu, int), seeds=seeds,
        )
    spec.with_oracle = spec.with_oracle or args.oracle
    rows = bench.run_sweep(spec, args.workers)
    report = bench.aggregate(rows) if args.aggregate else rows
    if args.out:
        bench.write_report(report, args.out)
        print(f"wrote {len(report)} rows to {args.out}")
    else:
        bench.write_report(report, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flexsky", description="Flexible skyline (ND_k) over ranked lists with sorted access only")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic dataset and its ranked lists")
    p.add_argument("--dist", choices=["uni", "ant", "UNI", "ANT"], default="uni")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="run the sorted-access engine on a list directory")
    p.add_argument("--lists", required=True, help="directory with list_i.csv and meta.json")
    p.add_argument("--k", type=int, default=bench.DEFAULTS["k"])
    p.add_argument("--mu", type=int, default=bench.DEFAULTS["mu"])
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    _add_polytope_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="brute-force answers on a dataset CSV")
    p.add_argument("--dataset", required=True)
    p.add_argument("--op", choices=["skyline", "skyband", "topk", "nd", "min-stop-depth"], default="nd")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--weights", help="comma-separated weights for topk (default: centroid)")
    p.add_argument("--normalize", action="store_true", help="divide each attribute by its maximum")
    _add_polytope_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="check engine output against the brute-force oracle")
    p.add_argument("--dataset", help="dataset CSV (default: the built-in nine-tuple example)")
    p.add_argument("--golden", action="store_true", help="check the built-in example's known answers")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--mu", type=int, default=1)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--random-suite", action="store_true")
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument("--max-n", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-fault", type=int, default=0, help=argparse.SUPPRESS)
    _add_polytope_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="parameter sweep with a CSV report")
    p.add_argument("--spec", help="JSON sweep spec (keys: dist n d k eps mu seeds with_oracle)")
    p.add_argument("--preset", choices=sorted(bench.PRESETS))
    p.add_argument("--dist", default="UNI")
    p.add_argument("--n", default=str(bench.DEFAULTS["n"]))
    p.add_argument("--d", default=str(bench.DEFAULTS["d"]))
    p.add_argument("--k", default=str(bench.DEFAULTS["k"]))
    p.add_argument("--eps", default=str(bench.DEFAULTS["eps"]))
    p.add_argument("--mu", default=str(bench.DEFAULTS["mu"]))
    p.add_argument("--seeds", default="1")
    p.add_argument("--oracle", action="store_true", help="also record the brute-force output size")
    p.add_argument("--aggregate", action="store_true", help="emit means over seeds instead of raw rows")
    p.add_argument("--workers", type=int, help="worker processes (default: FLEXSKY_THREADS or CPU count)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "d", None) is not None and args.command == "generate" and not 1 <= args.d <= MAX_DIM:
        parser.error(f"--d must be in [1, {MAX_DIM}]")
    try:
        return args.func(args)
    except (DatasetError, SourceError, PolytopeError, FileExistsError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
