"""Command line interface.

Subcommands: fit, benchmark, stats, generate, eval.  Exit codes: 0 success,
1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .datasets import (
    DataFormatError,
    EXPECTED_STATS,
    REFERENCE_SCORES,
    load_citation_dataset,
    load_generic,
    load_partition,
    manifest_for,
    write_generic,
    write_partition,
)
from .generate import BLOCK_PATTERNS, PlantedSpec, sample_network
from .metrics import nmi, pwf
from .model import DegenerateRateError, FitConfig, INIT_SCHEMES, fit
from .topology import WEIGHT_MODES, betweenness, clustering_coefficients, degrees

RUN_SCHEMA = "bcsbm-run/1"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_input_flags(p, generic=True):
    p.add_argument("--dataset", help="citation corpus name under --data-dir "
                   "(<name>.content / <name>.cites)")
    p.add_argument("--data-dir", default=".", help="directory holding corpus files")
    p.add_argument("--content", help="citation content file")
    p.add_argument("--cites", help="citation cites file")
    if generic:
        p.add_argument("--edges", help="generic edge list file")
        p.add_argument("--attrs", help="generic attribute file")
        p.add_argument("--labels", help="generic label file")


def _add_fit_flags(p):
    p.add_argument("--communities", type=int, help="number of communities "
                   "(default: known corpus value or label class count)")
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--restarts", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init", default="auto", choices=("auto",) + INIT_SCHEMES)
    p.add_argument("--weight-mode", default="bc", choices=WEIGHT_MODES)
    p.add_argument("--betweenness", default="raw", choices=("raw", "normalized"))
    p.add_argument("--threads", type=int, default=1)


def _load_input(args, parser):
    """Resolve the input flags to (name, network, report-or-None)."""
    if getattr(args, "edges", None):
        net, report = load_generic(args.edges, args.attrs, args.labels)
        return Path(args.edges).stem, net, report
    if args.content or args.cites:
        if not (args.content and args.cites):
            parser.error("--content and --cites must be given together")
        name = args.dataset or Path(args.content).stem
        manifest = manifest_for(name, Path(args.content).parent)
        manifest = type(manifest)(
            name=name, content_path=args.content, cites_path=args.cites,
            expected_n=manifest.expected_n, expected_m=manifest.expected_m,
            expected_attrs=manifest.expected_attrs,
            expected_classes=manifest.expected_classes,
        )
        net, report = load_citation_dataset(manifest)
        return name, net, report
    if args.dataset:
        net, report = load_citation_dataset(manifest_for(args.dataset, args.data_dir))
        return args.dataset, net, report
    parser.error("no input given; use --dataset, --content/--cites, or --edges")


def _resolve_c(args, name, net, parser):
    if args.communities is not None:
        return args.communities
    exp = EXPECTED_STATS.get(name.lower())
    if exp is not None:
        return exp[3]
    if net.labels is not None:
        return len(net.label_values)
    parser.error("--communities is required when the input has no labels")


def _config_from_args(args, c):
    return FitConfig(
        c=c, max_iter=args.max_iter, tol=args.tol, restarts=args.restarts,
        seed=args.seed, init_scheme=args.init, weight_mode=args.weight_mode,
        normalized_betweenness=args.betweenness == "normalized",
    )


def _partition_scores(assignment, truth):
    if truth is None:
        return None, None
    return nmi(assignment, truth), pwf(assignment, truth)


def _run_record(name, net, config, threads, result, timing):
    truth = net.labels
    restarts = []
    for rec in result.per_restart:
        score_n, score_p = _partition_scores(rec.partition, truth)
        restarts.append({
            "final_log_likelihood": float(rec.final_log_likelihood),
            "iterations": int(rec.iterations),
            "nmi": score_n,
            "pwf": score_p,
            "partition": [int(g) + 1 for g in rec.partition],
        })
    best_n, best_p = _partition_scores(result.partition.assignment, truth)
    record = {
        "schema": RUN_SCHEMA,
        "version": __version__,
        "dataset": name,
        "seed": config.seed,
        "config": {
            "communities": config.c,
            "max_iter": config.max_iter,
            "tol": config.tol,
            "restarts": config.restarts,
            "init_scheme": config.init_scheme,
            "weight_mode": config.weight_mode,
            "normalized_betweenness": config.normalized_betweenness,
        },
        "network": {"n": net.n, "m": net.m, "K": net.n_attrs,
                    "classes": len(net.label_values) or None},
        "chosen_scheme": result.chosen_scheme,
        "best_restart": result.best_restart,
        "log_likelihood_trace": [float(v) for v in result.log_likelihood_trace],
        "nodes": list(net.node_ids),
        "labels": ([net.label_values[g] for g in truth] if truth is not None else None),
        "partition": [int(g) + 1 for g in result.partition.assignment],
        "restarts": restarts,
        "metrics": _summarize_restarts(restarts, best_n, best_p),
        "skipped_attr_entries": result.skipped_attr_entries,
        "degenerate_nodes": [net.id_of(i) for i in result.degenerate_nodes],
        "floored_rates": result.floored_rates,
        # run environment, excluded from determinism comparisons
        "execution": {
            "created": datetime.now(timezone.utc).isoformat(),
            "threads": threads,
            "timing_seconds": timing,
        },
    }
    return record


def _summarize_restarts(restarts, best_n, best_p):
    out = {"nmi": best_n, "pwf": best_p}
    scores_n = [r["nmi"] for r in restarts if r["nmi"] is not None]
    scores_p = [r["pwf"] for r in restarts if r["pwf"] is not None]
    if scores_n:
        out["nmi_mean"] = float(np.mean(scores_n))
        out["nmi_max"] = float(np.max(scores_n))
        out["pwf_mean"] = float(np.mean(scores_p))
        out["pwf_max"] = float(np.max(scores_p))
    return out


def _write_json(path, record):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=1)
        fh.write("\n")


def cmd_fit(args, parser):
    t0 = time.perf_counter()
    name, net, _ = _load_input(args, parser)
    t_load = time.perf_counter() - t0
    c = _resolve_c(args, name, net, parser)
    config = _config_from_args(args, c)
    t0 = time.perf_counter()
    result = fit(net, config, n_jobs=args.threads)
    t_fit = time.perf_counter() - t0
    if not np.isfinite(result.final_log_likelihood):
        print("fit diverged: final log-likelihood is not finite", file=sys.stderr)
        return 3
    record = _run_record(name, net, config, args.threads, result,
                         {"load": t_load, "fit": t_fit})
    _write_json(args.out, record)
    if args.partition_out:
        write_partition(args.partition_out, net.node_ids, result.partition)
    m = record["metrics"]
    line = (f"{name}: best log-likelihood {result.final_log_likelihood:.6f} "
            f"(scheme {result.chosen_scheme}, restart {result.best_restart})")
    if m["nmi"] is not None:
        line += f", NMI {m['nmi']:.4f}, PWF {m['pwf']:.4f}"
    print(line)
    print(f"record written to {args.out}")
    return 0


def cmd_benchmark(args, parser):
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for name in args.dataset:
        net, _ = load_citation_dataset(manifest_for(name, args.data_dir))
        if net.labels is None:
            print(f"{name}: no labels, cannot score", file=sys.stderr)
            return 2
        c = args.communities or EXPECTED_STATS.get(
            name.lower(), (0, 0, 0, len(net.label_values)))[3]
        for mode in WEIGHT_MODES:
            config = FitConfig(
                c=c, max_iter=args.max_iter, tol=args.tol,
                restarts=args.restarts, seed=args.seed, init_scheme=args.init,
                weight_mode=mode,
                normalized_betweenness=args.betweenness == "normalized",
            )
            t0 = time.perf_counter()
            result = fit(net, config, n_jobs=args.threads)
            elapsed = time.perf_counter() - t0
            record = _run_record(name, net, config, args.threads, result,
                                 {"fit": elapsed})
            _write_json(out_dir / f"run_{name}_{mode}.json", record)
            rows.append((name, mode, record["metrics"]))
            m = record["metrics"]
            print(f"{name}/{mode}: NMI mean {m['nmi_mean']:.4f} max {m['nmi_max']:.4f}, "
                  f"PWF mean {m['pwf_mean']:.4f} max {m['pwf_max']:.4f} "
                  f"({elapsed:.1f}s)")
    table = _format_table(rows)
    (out_dir / "summary.txt").write_text(table, encoding="utf-8")
    print()
    print(table, end="")
    print(f"\nrecords and summary written to {out_dir}")
    return 0


def _format_table(rows):
    header = (f"{'dataset':<12} {'mode':<7} "
              f"{'nmi_mean':>8} {'nmi_max':>8} {'pwf_mean':>8} {'pwf_max':>8} "
              f"{'ref_nmi_mean':>12} {'ref_nmi_max':>11} "
              f"{'ref_pwf_mean':>12} {'ref_pwf_max':>11}\n")
    lines = [header]
    for name, mode, m in rows:
        ref = REFERENCE_SCORES.get(name.lower()) if mode == "bc" else None
        if ref:
            tail = (f"{ref['nmi'][0]:>12.4f} {ref['nmi'][1]:>11.4f} "
                    f"{ref['pwf'][0]:>12.4f} {ref['pwf'][1]:>11.4f}")
        else:
            tail = f"{'-':>12} {'-':>11} {'-':>12} {'-':>11}"
        lines.append(
            f"{name:<12} {mode:<7} "
            f"{m['nmi_mean']:>8.4f} {m['nmi_max']:>8.4f} "
            f"{m['pwf_mean']:>8.4f} {m['pwf_max']:>8.4f} {tail}\n")
    return "".join(lines)


def cmd_stats(args, parser):
    name, net, report = _load_input(args, parser)
    k = degrees(net)
    cc = clustering_coefficients(net)
    btw = betweenness(net, normalized=args.betweenness == "normalized")
    print(f"dataset: {name}")
    print(f"n={net.n} m={net.m} K={net.n_attrs} "
          f"classes={len(net.label_values) or '-'} "
          f"self_loops={net.n_self_loops} attr_entries={net.n_attr_entries}")
    if report is not None and report.dangling_citations:
        print(f"dangling citations dropped: {report.dangling_citations}")
    if net.duplicate_edges:
        print(f"duplicate edges collapsed: {net.duplicate_edges}")
    for label, v in (("degree", k.astype(float)), ("clustering", cc),
                     ("betweenness", btw)):
        print(f"{label:<12} min {v.min():.4f}  mean {v.mean():.4f}  "
              f"max {v.max():.4f}")
    return 0


def cmd_generate(args, parser):
    spec = PlantedSpec(
        n=args.n, c=args.communities, pattern=args.pattern, ratio=args.ratio,
        n_attrs=args.attrs, affinity=args.affinity,
        edge_scale=args.edge_scale, attr_scale=args.attr_scale, seed=args.seed,
    )
    sample = sample_network(spec)
    prefix = args.out_prefix
    write_generic(sample.network, f"{prefix}.edges", f"{prefix}.attrs",
                  f"{prefix}.labels")
    net = sample.network
    print(f"wrote {prefix}.edges/.attrs/.labels: n={net.n} m={net.m} "
          f"K={net.n_attrs} attr_entries={net.n_attr_entries}")
    print(f"raw link mass {sample.raw_link_mass}, clamped pairs "
          f"{sample.clamped_pairs}, clamped attrs {sample.clamped_attrs}")
    return 0


def cmd_eval(args, parser):
    pred_ids, pred = load_partition(args.pred)
    truth_ids, truth = load_partition(args.truth)
    if set(pred_ids) != set(truth_ids):
        raise DataFormatError("partition files cover different node sets")
    order = {v: i for i, v in enumerate(truth_ids)}
    aligned = [None] * len(pred)
    for v, g in zip(pred_ids, pred):
        aligned[order[v]] = g
    _, pred_codes = np.unique(aligned, return_inverse=True)
    _, truth_codes = np.unique(truth, return_inverse=True)
    print(f"NMI {nmi(pred_codes, truth_codes):.6f}")
    print(f"PWF {pwf(pred_codes, truth_codes):.6f}")
    return 0


def _build_parser():
    parser = _Parser(prog="bcsbm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[], help="fit the model and write a run record")
    _add_input_flags(p)
    _add_fit_flags(p)
    p.add_argument("--out", default="runrecord.json")
    p.add_argument("--partition-out", help="also write the best partition")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("benchmark",
                       help="30-restart mean/max protocol across weight modes")
    p.add_argument("--dataset", action="append", required=True,
                   help="corpus name; repeat for several")
    p.add_argument("--data-dir", default=".")
    _add_fit_flags(p)
    p.add_argument("--out-dir", default="benchmark_results")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("stats", help="network summary statistics")
    _add_input_flags(p)
    p.add_argument("--betweenness", default="raw", choices=("raw", "normalized"))
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("generate", help="draw a planted synthetic network")
    p.add_argument("--pattern", default="assortative", choices=BLOCK_PATTERNS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--communities", type=int, required=True)
    p.add_argument("--attrs", type=int, default=0, help="number of attributes K")
    p.add_argument("--ratio", type=float, default=8.0)
    p.add_argument("--affinity", type=float, default=8.0)
    p.add_argument("--edge-scale", type=float, default=None)
    p.add_argument("--attr-scale", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", default="planted")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("eval", help="score one partition file against another")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except DegenerateRateError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
