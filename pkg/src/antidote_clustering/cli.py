"""Command-line surface: antidote runs, lambda sweeps, quality metrics and
synthetic fixture generation. All randomness flows from --seed; seeds are
split deterministically (init, optimizer, clustering in that order), so a
rerun with the same seed reproduces output files byte for byte.

Exit codes: 0 success, 1 internal error, 2 user/input error.
"""

import argparse
import csv
import json
import sys

import numpy as np

from .antidote import (
    AntidoteConfig,
    AntidoteResult,
    algorithm1,
    algorithm2,
    compare_vanilla,
)
from .clustering import ClusteringSpec, kmeans, assign, Centers
from .datasets import Dataset, load_csv, make_skewed_blobs, standardize
from .errors import AntidoteError, ConfigError, DataError
from .fairness import FairnessSpec
from .metrics import quality_report

COMBINATIONS = {
    "kmeans+balance": ("kmeans", "balance"),
    "kmeans+social": ("kmeans", "social"),
    "spectral+balance": ("spectral", "balance"),
    "son+social": ("son", "social"),
}

CSV_HEADER = [
    "combination", "dataset", "k", "alpha", "V_ratio", "F_vanilla", "F_antidote",
    "silhouette_vanilla", "silhouette_antidote", "db_vanilla", "db_antidote",
    "ch_vanilla", "ch_antidote", "status", "seed",
]


def _fmt(x):
    if x is None:
        return "nan"
    return f"{float(x):.4f}"


def _load_dataset(args) -> Dataset:
    ds = load_csv(args.data, args.group_col, args.feature_cols.split(","))
    if args.standardize:
        ds = standardize(ds)
    return ds


def _build_config(args, notion) -> AntidoteConfig:
    return AntidoteConfig(
        V_s=args.vs,
        xi=args.xi,
        alpha=args.alpha,
        max_outer_iters=args.max_outer_iters,
        max_V_fraction=args.max_v_fraction,
        n_prime=args.n_prime,
        sre_stages=args.sre_stages,
        inner_budget=args.inner_budget,
        seed=args.seed,
        gamma=args.gamma,
        lam=args.lam,
    )


def _result_json(record, result: AntidoteResult, args, combination):
    def qdict(q):
        if q is None:
            return None
        return {
            "silhouette": q.silhouette,
            "davies_bouldin": q.davies_bouldin,
            "calinski_harabasz": q.calinski_harabasz,
        }

    return {
        "combination": combination,
        "dataset": args.data,
        "k": args.k,
        "alpha": record.alpha,
        "V": result.V.tolist(),
        "V_ratio": record.V_ratio,
        "F_vanilla": record.F_vanilla,
        "F_antidote": record.F_antidote,
        "iterations": result.iterations,
        "status": record.status,
        "seed": args.seed,
        "quality_vanilla": qdict(record.quality_vanilla),
        "quality_antidote": qdict(record.quality_antidote),
    }


def _append_csv_row(path, record, args, combination):
    qv = record.quality_vanilla
    qa = record.quality_antidote
    row = [
        combination, args.data, str(args.k), _fmt(record.alpha), _fmt(record.V_ratio),
        _fmt(record.F_vanilla), _fmt(record.F_antidote),
        _fmt(qv.silhouette if qv else None), _fmt(qa.silhouette if qa else None),
        _fmt(qv.davies_bouldin if qv else None), _fmt(qa.davies_bouldin if qa else None),
        _fmt(qv.calinski_harabasz if qv else None), _fmt(qa.calinski_harabasz if qa else None),
        record.status, str(args.seed),
    ]
    new_file = True
    try:
        with open(path, "r", encoding="utf-8") as fh:
            new_file = fh.readline() == ""
    except FileNotFoundError:
        pass
    with open(path, "a", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if new_file:
            writer.writerow(CSV_HEADER)
        writer.writerow(row)


def cmd_run(args):
    ds = _load_dataset(args)
    kind, notion = COMBINATIONS[args.combination]
    fairness = FairnessSpec(notion=notion, alpha=args.alpha)
    cfg = _build_config(args, notion)
    if kind == "son":
        spec = ClusteringSpec(kind="son", k=args.k, lam=args.lam)
        result = algorithm1(ds, cfg)
    else:
        spec = ClusteringSpec(kind=kind, k=args.k)
        result = algorithm2(ds, spec, fairness, cfg)
    record = compare_vanilla(ds, spec, fairness, result)
    if args.out_json:
        with open(args.out_json, "w", encoding="utf-8") as fh:
            json.dump(_result_json(record, result, args, args.combination), fh,
                      sort_keys=True, indent=2)
            fh.write("\n")
    if args.out_csv:
        _append_csv_row(args.out_csv, record, args, args.combination)
    print(
        f"{args.combination}: F_vanilla={_fmt(record.F_vanilla)} "
        f"F_antidote={_fmt(record.F_antidote)} |V|/|U|={_fmt(record.V_ratio)} "
        f"status={record.status}"
    )
    return 0


def cmd_sweep_lambda(args):
    if args.combination != "son+social":
        raise ConfigError("sweep-lambda requires combination son+social")
    ds = _load_dataset(args)
    lambdas = [float(x) for x in args.lambdas.split(",")]
    seeds = np.random.SeedSequence(args.seed).spawn(len(lambdas))
    rows = []
    for lam, lam_seed in zip(lambdas, seeds):
        cfg = AntidoteConfig(
            V_s=args.vs, xi=args.xi, alpha=args.alpha,
            max_outer_iters=args.max_outer_iters, max_V_fraction=args.max_v_fraction,
            inner_budget=args.inner_budget, seed=int(lam_seed.generate_state(1)[0]),
            gamma=args.gamma, lam=lam,
        )
        result = algorithm1(ds, cfg)
        rows.append((lam, result.fairness_before, result.fairness_after,
                     result.fairness_before - result.fairness_after))
    with open(args.out_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "F_vanilla", "F_antidote", "difference"])
        for lam, fv, fa, diff in rows:
            writer.writerow([f"{lam:g}", _fmt(fv), _fmt(fa), _fmt(diff)])
    print(f"wrote {len(rows)} rows to {args.out_csv}")
    return 0


def cmd_metrics(args):
    ds = _load_dataset(args)
    if args.labels_col:
        labels_ds = load_csv(args.data, args.labels_col, args.feature_cols.split(","))
        labels = labels_ds.groups
    elif args.kmeans_k:
        centers = kmeans(ds.points, args.kmeans_k, args.seed)
        labels = assign(ds.points, centers).labels
    else:
        raise ConfigError("provide --labels-col or --kmeans-k")
    report = quality_report(ds.points, labels)
    payload = {
        "silhouette": report.silhouette,
        "davies_bouldin": report.davies_bouldin,
        "calinski_harabasz": report.calinski_harabasz,
    }
    text = json.dumps(payload, sort_keys=True, indent=2)
    if args.out_json:
        with open(args.out_json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def cmd_gen_fixture(args):
    ds = make_skewed_blobs(
        args.n, args.d, args.g, args.skew, args.seed, blobs=args.blobs
    )
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i}" for i in range(args.d)] + ["group"])
        for row, grp in zip(ds.points, ds.groups):
            writer.writerow([repr(float(v)) for v in row] + [f"g{grp}"])
    print(f"wrote {ds.n} rows to {args.out}")
    return 0


def _add_common_data_args(p):
    p.add_argument("--data", required=True, help="input CSV path")
    p.add_argument("--group-col", default="group")
    p.add_argument("--feature-cols", required=True, help="comma-separated feature columns")
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--seed", type=int, default=0)


def _add_antidote_args(p):
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--vs", type=int, default=1, help="initial antidote set size")
    p.add_argument("--xi", type=int, default=1, help="growth step")
    p.add_argument("--max-outer-iters", type=int, default=20)
    p.add_argument("--max-v-fraction", type=float, default=0.5)
    p.add_argument("--n-prime", type=int, default=100)
    p.add_argument("--sre-stages", type=int, default=3)
    p.add_argument("--inner-budget", type=int, default=1000)
    p.add_argument("--gamma", type=float, default=0.99)
    p.add_argument("--lam", type=float, default=0.01)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="antidote-clustering",
        description="Compute antidote datasets that make vanilla clustering fairer.",
    )
    parser.add_argument("--config", help="flat key=value config file; flags win")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="one antidote run, JSON + CSV output")
    _add_common_data_args(p_run)
    _add_antidote_args(p_run)
    p_run.add_argument("--combination", required=True, choices=sorted(COMBINATIONS))
    p_run.add_argument("-k", type=int, default=2)
    p_run.add_argument("--out-json")
    p_run.add_argument("--out-csv")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep-lambda", help="lambda sweep for son+social")
    _add_common_data_args(p_sweep)
    _add_antidote_args(p_sweep)
    p_sweep.add_argument("--combination", default="son+social")
    p_sweep.add_argument("--lambdas", required=True, help="comma-separated lambda grid")
    p_sweep.add_argument("--out-csv", required=True)
    p_sweep.set_defaults(func=cmd_sweep_lambda)

    p_metrics = sub.add_parser("metrics", help="quality metrics for a clustering")
    _add_common_data_args(p_metrics)
    p_metrics.add_argument("--labels-col", help="column holding cluster labels")
    p_metrics.add_argument("--kmeans-k", type=int, help="fit k-means with this k instead")
    p_metrics.add_argument("--out-json")
    p_metrics.set_defaults(func=cmd_metrics)

    p_gen = sub.add_parser("gen-fixture", help="write a skewed-blobs CSV fixture")
    p_gen.add_argument("--n", type=int, default=200)
    p_gen.add_argument("--d", type=int, default=2)
    p_gen.add_argument("--g", type=int, default=2)
    p_gen.add_argument("--skew", type=float, default=0.6)
    p_gen.add_argument("--blobs", type=int, default=None)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_gen_fixture)

    return parser


def _apply_config_file(parser, argv):
    # flags win over config-file values: config entries become defaults
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    path = argv[idx + 1]
    overrides = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            overrides[key.strip().replace("-", "_")] = value.strip()
    for action in parser._subparsers._group_actions[0].choices.values():  # noqa: SLF001
        defaults = {}
        for act in action._actions:  # noqa: SLF001
            if act.dest in overrides:
                raw = overrides[act.dest]
                defaults[act.dest] = act.type(raw) if act.type else raw
        action.set_defaults(**defaults)
    return argv


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except (DataError, ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AntidoteError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
