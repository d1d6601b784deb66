"""Command-line front end: ``entropy-flow {flow,detect,entropy,oracle,metrics}``.

Exit codes: 0 success, 1 oracle mismatch, 2 usage or input error,
3 numerical abort (a weight or entropy became non-finite).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .community import ari, modularity, nmi, sweep
from .flow import (
    FlowConfig,
    NumericalAbort,
    classify_trajectory,
    closed_form_equal_triangle,
    closed_form_segment,
    edge_entropies,
    run_flow,
)
from .graph import GraphError, Partition, build_graph
from .walk import ParameterError, WalkEngine

VARIANT_FLAGS = {"sym": "symmetric", "symmetric": "symmetric", "forward": "forward", "backward": "backward"}
ORACLE_TOL = 1e-9


def _dataset(args, with_labels: bool = True) -> io.Dataset:
    labels = getattr(args, "labels", None) if with_labels else None
    if args.fixture:
        if with_labels and labels is None:
            labels = io.fixture_path(args.fixture, "labels")
        return io.load_dataset(io.fixture_path(args.fixture), labels, args.fixture)
    if not args.input:
        raise ParameterError("one of --input or --fixture is required")
    return io.load_dataset(args.input, labels)


def _config(args) -> FlowConfig:
    return FlowConfig(args.alpha, args.step_size, args.steps, VARIANT_FLAGS[args.variant])


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _sweep_csv(report, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        cols = ["cutoff", "num_communities", "modularity"] + (["ari", "nmi"] if report.has_truth else [])
        out.writerow(cols)
        for r in report.reports:
            row = [io.fmt(r.cutoff), r.num_communities, io.fmt(r.modularity)]
            if report.has_truth:
                row += [io.fmt(r.ari), io.fmt(r.nmi)]
            out.writerow(row)


def cmd_flow(args) -> int:
    ds = _dataset(args)
    cfg = _config(args)
    trace = run_flow(ds.graph, ds.initial_weights, cfg, threads=args.threads)
    out = _out_dir(args)
    io.write_trace(ds.graph, trace, out / "trace.csv")
    final = trace.final
    print(f"dataset      {ds.name}: {ds.graph.n} vertices, {ds.graph.m} edges")
    print(f"flow         alpha={cfg.alpha} step={cfg.step_size} steps={cfg.num_steps} variant={cfg.variant}")
    print(f"runtime      {trace.elapsed:.4f} s (flow updates only)")
    if ds.graph.m:
        print(f"final weight max={final.max():.6g} min={final.min():.6g}")
    if trace.num_steps >= args.window:
        v = classify_trajectory(trace, args.entropy_tol, args.growth_floor, args.window)
        print(f"trajectory   {v.kind} (max final entropy {v.final_entropy_max:.3g}, "
              f"min growth rate {v.window_growth_min:.3g})")
    else:
        print(f"trajectory   n/a (needs at least {args.window} steps)")
    print(f"wrote        {out / 'trace.csv'}")
    return 0


def _best_lines(report) -> list[str]:
    lines = []
    metrics = ("ari", "nmi", "modularity") if report.has_truth else ("modularity",)
    for metric in metrics:
        r = report.best(metric)
        row = f"best {metric:<10} cutoff={r.cutoff:.6g} communities={r.num_communities} Q={r.modularity:.4f}"
        if report.has_truth:
            row += f" ARI={r.ari:.4f} NMI={r.nmi:.4f}"
        lines.append(row)
    return lines


def cmd_detect(args) -> int:
    ds = _dataset(args)
    cfg = _config(args)
    trace = run_flow(ds.graph, ds.initial_weights, cfg, threads=args.threads)
    report = sweep(ds.graph, trace.final, ds.ground_truth, args.modularity_on)
    out = _out_dir(args)
    meta = {
        "dataset": ds.name,
        "alpha": cfg.alpha,
        "step_size": cfg.step_size,
        "steps": cfg.num_steps,
        "variant": cfg.variant,
        "modularity_on": args.modularity_on,
    }
    io.write_report(report, out / "report.json", meta)
    _sweep_csv(report, out / "sweep.csv")
    if args.iteration_study:
        with open(out / "iterations.csv", "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["step", "modularity"] + (["ari", "nmi"] if report.has_truth else []))
            for j, weights in enumerate(trace.weights):
                r = sweep(ds.graph, weights, ds.ground_truth, args.modularity_on)
                row = [j, io.fmt(r.best("modularity").modularity)]
                if r.has_truth:
                    row += [io.fmt(r.best("ari").ari), io.fmt(r.best("nmi").nmi)]
                w.writerow(row)
    print(f"dataset {ds.name}: {ds.graph.n} vertices, {ds.graph.m} edges; "
          f"{len(report.reports)} cutoffs; flow {trace.elapsed:.4f} s")
    for line in _best_lines(report):
        print(line)
    print(f"wrote {out / 'report.json'}")
    return 0


def cmd_entropy(args) -> int:
    ds = _dataset(args)
    cfg = _config(args)
    g = ds.graph
    engine = WalkEngine(g, threads=args.threads)
    d0 = edge_entropies(g, ds.initial_weights, cfg.alpha, cfg.variant, engine)
    trace = run_flow(g, ds.initial_weights, cfg, threads=args.threads)
    d1 = edge_entropies(g, trace.final, cfg.alpha, cfg.variant, engine)
    out = _out_dir(args)
    with open(out / "entropy.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["edge_u", "edge_v", "weight_initial", "entropy_initial", "weight_final", "entropy_final"])
        for e in range(g.m):
            u, v = g.edge_names(e)
            w.writerow([u, v, io.fmt(ds.initial_weights[e]), io.fmt(d0[e]), io.fmt(trace.final[e]), io.fmt(d1[e])])
    io.histogram_export(d0, args.bins, out / "hist_entropy_initial.csv")
    io.histogram_export(ds.initial_weights, args.bins, out / "hist_weight_initial.csv")
    io.histogram_export(d1, args.bins, out / "hist_entropy.csv")
    io.histogram_export(trace.final, args.bins, out / "hist_weight.csv")
    if args.dump_walks:
        r = engine.distributions(ds.initial_weights, cfg.alpha)
        walks = {g.names[x]: {g.names[z]: float(r[x, z]) for z in np.flatnonzero(r[x])} for x in range(g.n)}
        io.write_json(walks, out / "walks.json")
    print(f"entropy initial: min={d0.min():.6g} max={d0.max():.6g}; "
          f"after {cfg.num_steps} steps: min={d1.min():.6g} max={d1.max():.6g}")
    print(f"wrote {out}")
    return 0


def _oracle_rows(alphas, w0s, steps_sizes, n_steps, fault: float):
    segment, _ = build_graph([("x", "y")])
    triangle, _ = build_graph([("x", "y"), ("y", "z"), ("x", "z")])
    cases = [("segment", segment, closed_form_segment), ("triangle", triangle, closed_form_equal_triangle)]
    for name, g, exact in cases:
        for alpha in alphas:
            for w0 in w0s:
                for s in steps_sizes:
                    cfg = FlowConfig(alpha, s, n_steps)
                    trace = run_flow(g, np.full(g.m, w0), cfg, threads=1)
                    euler = w0 + fault * (trace.weights - w0)
                    t = np.arange(n_steps + 1) * s
                    ref = np.array([exact(alpha, w0, tj) for tj in t])
                    dev = float(np.max(np.abs(euler - ref[:, None])))
                    slope = float((euler[-1].max() - w0) / (n_steps * s)) if n_steps else 0.0
                    yield name, alpha, w0, s, dev, slope


def cmd_oracle(args) -> int:
    alphas = [round(0.1 * k, 1) for k in range(1, 10)] if not args.alphas else args.alphas
    alphas = list(alphas) + [1 / 3]
    fault = 1 + 1e-6 if args.inject_fault else 1.0
    worst = 0.0
    print(f"{'graph':<9} {'alpha':>8} {'w0':>5} {'s':>5} {'max |dev|':>11} {'slope':>11}")
    for name, alpha, w0, s, dev, slope in _oracle_rows(alphas, args.w0, args.step_sizes, args.steps, fault):
        worst = max(worst, dev)
        print(f"{name:<9} {alpha:>8.6g} {w0:>5g} {s:>5g} {dev:>11.3e} {slope:>11.6g}")
    ok = worst < ORACLE_TOL
    print(f"max deviation {worst:.3e} -> {'PASS' if ok else 'FAIL'} (tolerance {ORACLE_TOL:g})")
    return 0 if ok else 1


def cmd_metrics(args) -> int:
    a = io.read_label_map(args.labels)
    order = list(a)
    result = {}
    if args.compare:
        b = io.read_label_map(args.compare)
        if set(a) != set(b):
            diff = sorted(set(a) ^ set(b))
            raise GraphError(f"label files cover different vertices: {', '.join(diff[:10])}")
        pa = Partition.from_labels([a[v] for v in order])
        pb = Partition.from_labels([b[v] for v in order])
        result["ari"] = ari(pa, pb)
        result["nmi"] = nmi(pa, pb)
    if args.input or args.fixture:
        ds = _dataset(args, with_labels=False)
        part, _ = io.read_labels(args.labels, ds.graph)
        result["modularity"] = modularity(ds.graph, part)
    if not result:
        raise ParameterError("metrics needs --compare and/or a graph (--input/--fixture)")
    print(json.dumps(result, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entropy-flow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    data = argparse.ArgumentParser(add_help=False)
    src = data.add_mutually_exclusive_group()
    src.add_argument("--input", help="edge list file (u v [w] per line)")
    src.add_argument("--fixture", choices=io.FIXTURES, help="bundled dataset")
    data.add_argument("--labels", help="ground-truth label file (vertex label per line)")

    flow = argparse.ArgumentParser(add_help=False)
    flow.add_argument("--alpha", type=float, default=0.5)
    flow.add_argument("--steps", type=int, default=20)
    flow.add_argument("--step-size", type=float, default=0.01)
    flow.add_argument("--variant", choices=sorted(VARIANT_FLAGS), default="sym")
    flow.add_argument("--out-dir", default="ef-out")
    flow.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")

    p = sub.add_parser("flow", parents=[data, flow], help="run the entropy flow and write trace.csv")
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--entropy-tol", type=float, default=1e-6)
    p.add_argument("--growth-floor", type=float, default=1e-3)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("detect", parents=[data, flow], help="flow, then surgery sweep; writes report.json")
    p.add_argument("--modularity-on", choices=("surgery", "original"), default="surgery")
    p.add_argument("--iteration-study", action="store_true",
                   help="also write iterations.csv with best metrics after every step")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("entropy", parents=[data, flow], help="edge entropies and histograms before/after the flow")
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--dump-walks", action="store_true", help="write walks.json with initial walk distributions")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("oracle", help="check Euler traces against closed forms on segment and triangle")
    p.add_argument("--alphas", type=float, nargs="+")
    p.add_argument("--w0", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    p.add_argument("--step-sizes", type=float, nargs="+", default=[0.01, 0.1])
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("metrics", help="ARI/NMI between label files, modularity on a graph")
    p.add_argument("--labels", required=True)
    p.add_argument("--compare", help="second label file")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input")
    src.add_argument("--fixture", choices=io.FIXTURES)
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalAbort as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
