"""Command-line pipeline: train, partition, explain, shapley, project,
hypothesis, trend, classify.  Inputs are CSV datasets with a header row
and a designated binary label column; models are JSON files."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import analysis, logiccode, network, partition, qldt
from .encoding import (
    LabeledSample,
    RawObject,
    fit_fuzzifier,
    fuzzify,
    minterm_bits,
    minterm_transform,
)


class CliError(Exception):
    pass


def load_dataset(path, label_column):
    """Read a CSV with header; returns (attribute names, samples)."""
    p = Path(path)
    if not p.exists():
        raise CliError(f"dataset file not found: {path}")
    with open(p, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CliError(f"dataset file is empty: {path}") from None
        if label_column not in header:
            raise CliError(f"label column {label_column!r} not in header {header}")
        label_idx = header.index(label_column)
        names = [h for i, h in enumerate(header) if i != label_idx]
        samples = []
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                label_raw = float(row[label_idx])
            except (ValueError, IndexError):
                raise CliError(f"bad label in row {row_no}: {row}") from None
            if label_raw not in (0.0, 1.0):
                raise CliError(
                    f"label must be 0 or 1, got {row[label_idx]!r} in row {row_no}"
                )
            values = tuple(
                float(v) for i, v in enumerate(row) if i != label_idx
            )
            samples.append(LabeledSample(RawObject(values), int(label_raw)))
    return names, samples


def minterm_samples(samples, spec):
    return [
        (minterm_transform(fuzzify(s.object, spec)), s.label) for s in samples
    ]


def load_weights_file(path):
    """One weight per line, or comma-separated; length must be 2^n."""
    p = Path(path)
    if not p.exists():
        raise CliError(f"weights file not found: {path}")
    text = p.read_text().replace(",", "\n")
    weights = [float(tok) for tok in text.split() if tok]
    if not weights or len(weights) & (len(weights) - 1):
        raise CliError(f"weights file must hold a power-of-two count, got {len(weights)}")
    return partition.CellWeights(tuple(weights))


def _load_model(path):
    p = Path(path)
    if not p.exists():
        raise CliError(f"model file not found: {path}")
    try:
        return network.load_model(p)
    except network.ModelFormatError as exc:
        raise CliError(str(exc)) from exc


def _parse_levels(text, bcl_max):
    if text is None:
        return list(range(bcl_max + 1))
    try:
        levels = sorted({int(t) for t in text.split(",") if t.strip() != ""})
    except ValueError:
        raise CliError(f"bad level set {text!r}") from None
    if any(not 0 <= b <= bcl_max for b in levels):
        raise CliError(f"levels must lie in 0..{bcl_max}")
    return levels


def _cell_weights_from_args(args, names_hint=None):
    """Resolve the cell weights either from a weights override file or by
    extraction from the model; returns (weights, names, threshold)."""
    if getattr(args, "weights_override", None):
        cw = load_weights_file(args.weights_override)
        names = names_hint or [f"a{j + 1}" for j in range(cw.n)]
        threshold = getattr(args, "threshold", None)
        return cw, names, threshold if threshold is not None else 0.5
    if not getattr(args, "model", None):
        raise CliError("either --model or --weights-override is required")
    ann, spec = _load_model(args.model)
    if args.cell is None:
        raise CliError("--cell is required when extracting from a model")
    try:
        cell = partition.CellId(args.cell, ann.relu_count)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    cw = partition.extract_cell_weights(ann, cell)
    names = names_hint or [f"a{j + 1}" for j in range(cw.n)]
    return cw, names, ann.threshold


def _fmt(x, nd=3):
    return f"{x:.{nd}f}"


def cmd_train(args):
    names, samples = load_dataset(args.data, args.label)
    if not samples:
        raise CliError("dataset has no rows")
    spec = fit_fuzzifier(samples, args.fuzzifier)
    mts = minterm_samples(samples, spec)
    n = len(names)
    arch = [2**n, args.relu_nodes, 1]
    cfg = network.TrainConfig(
        learning_rate=args.lr, epochs=args.epochs, seed=args.seed
    )
    try:
        ann, acc = network.train(mts, arch, cfg)
    except network.TrainingDivergedError as exc:
        raise CliError(str(exc)) from exc
    network.save_model(args.model, ann, spec)
    print(f"attributes={','.join(names)}")
    print(f"training_accuracy={_fmt(acc)}")
    print(f"threshold={_fmt(ann.threshold)}")
    print(f"model={args.model}")
    return 0


def cmd_partition(args):
    ann, spec = _load_model(args.model)
    names, samples = load_dataset(args.data, args.label)
    if spec is None:
        raise CliError("model has no fuzzifier; cannot ingest raw data")
    report = partition.partition_dataset(ann, minterm_samples(samples, spec))
    header = ["cell_id", "relu_bits", "count_label1", "count_label0"]
    rows = [
        [r.cell.p, "".join(map(str, r.cell.bits)), r.count_label1, r.count_label0]
        for r in report.rows
    ]
    if args.out:
        _write_csv(args.out, header, rows)
    print(f"{'cell':>6} {'relu':>6} {'label1':>8} {'label0':>8}")
    for r in report.rows:
        print(
            f"{'ANN_' + str(r.cell.p):>6} {''.join(map(str, r.cell.bits)):>6} "
            f"{r.count_label1:>8} {r.count_label0:>8}"
        )
    return 0


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def cmd_explain(args):
    names_hint = None
    samples = None
    spec = None
    if args.data:
        names_hint, raw = load_dataset(args.data, args.label)
        samples = raw
    cw, names, threshold = _cell_weights_from_args(args, names_hint)
    if args.model and spec is None and args.data:
        _, spec = _load_model(args.model)
    scaled = logiccode.scale_weights([cw], threshold, scope=args.scope)[0]
    bt = logiccode.bitcode(scaled, args.bcl_max)
    report = logiccode.energy_report(scaled, bt)
    recon = bt.reconstruction()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n = cw.n
    header = (
        ["k"] + names + ["weight", "scaled"]
        + [f"bit_2^-{b}" for b in range(args.bcl_max + 1)] + ["reconstruction"]
    )
    rows = []
    for k in range(2**n):
        rows.append(
            [k] + minterm_bits(k, n)
            + [repr(cw.weights[k]), repr(scaled.weights[k])]
            + [bt.bits[b][k] for b in range(args.bcl_max + 1)]
            + [repr(float(recon[k]))]
        )
    _write_csv(out_dir / "weights.csv", header, rows)

    energy_rows = [
        [le.bcl, le.set_bits, repr(le.absolute), repr(le.relative_percent)]
        for le in report.levels
    ]
    _write_csv(
        out_dir / "energy.csv",
        ["level", "set_bits", "absolute_energy", "relative_energy_percent"],
        energy_rows,
    )

    print(f"cell={cw.cell if cw.cell else 'override'}")
    print(f"scaled_threshold={_fmt(scaled.params.scaled_threshold)}")
    print(f"weight_sum={_fmt(report.weight_sum)}")
    print(f"bitcode_sum={_fmt(report.bitcode_sum)}")
    if report.degenerate:
        print("energy=degenerate (weight sum is zero)")
    for le in report.levels:
        print(
            f"level 2^-{le.bcl}: set_bits={le.set_bits} "
            f"energy={_fmt(le.absolute)} ({_fmt(le.relative_percent, 1)}%)"
        )
    for bcl in range(args.bcl_max + 1):
        expr = logiccode.level_expression(bt, bcl)
        tree = qldt.build_qldt(expr, names)
        dot_path = out_dir / f"level_{bcl}.dot"
        dot_path.write_text(qldt.render(tree, names, format="dot"))
        print(f"tree level 2^-{bcl}: {dot_path}")

    if samples is not None and spec is not None:
        mts = minterm_samples(samples, spec)
        cumulative = []
        for bcl in range(args.bcl_max + 1):
            cumulative.append(bcl)
            acc = logiccode.level_accuracy(bt, scaled.params, mts, cumulative)
            print(f"accuracy levels 0..{bcl}: {_fmt(acc)}")
    return 0


def cmd_shapley(args):
    names_hint = None
    if args.data:
        names_hint, _ = load_dataset(args.data, args.label)
    cw, names, _ = _cell_weights_from_args(args, names_hint)
    result = partition.shapley(cw)
    rows = []
    for name, value in zip(names, result.values):
        print(f"Sh_{name}={_fmt(value)}")
        rows.append([name, repr(value)])
    if args.out:
        _write_csv(args.out, ["attribute", "shapley_value"], rows)
    return 0


def _resolve_keep(keep_arg, names):
    keep = []
    for tok in keep_arg.split(","):
        tok = tok.strip()
        if tok in names:
            keep.append(names.index(tok))
        else:
            try:
                keep.append(int(tok) - 1)
            except ValueError:
                raise CliError(f"unknown attribute {tok!r}") from None
    return keep


def cmd_project(args):
    names_hint = None
    if args.data:
        names_hint, _ = load_dataset(args.data, args.label)
    cw, names, threshold = _cell_weights_from_args(args, names_hint)
    keep = _resolve_keep(args.keep, names)
    try:
        projected = logiccode.project(cw, keep)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    kept_names = [names[j] for j in sorted(keep)]
    scaled = logiccode.scale_weights([projected], threshold, scope="per-cell")[0]
    bt = logiccode.bitcode(scaled, args.bcl_max)
    report = logiccode.energy_report(scaled, bt)
    print(f"kept={','.join(kept_names)}")
    m = projected.n
    for kappa in range(2**m):
        bits = "".join(map(str, minterm_bits(kappa, m)))
        code = "".join(str(bt.bits[b][kappa]) for b in range(args.bcl_max + 1))
        print(
            f"minterm {bits}: raw={_fmt(projected.weights[kappa])} "
            f"scaled={_fmt(scaled.weights[kappa])} bits={code}"
        )
    print(f"weight_sum={_fmt(report.weight_sum)}")
    for le in report.levels:
        print(
            f"level 2^-{le.bcl}: set_bits={le.set_bits} "
            f"({_fmt(le.relative_percent, 1)}%)"
        )
    return 0


def cmd_hypothesis(args):
    names = None
    if args.data:
        names, _ = load_dataset(args.data, args.label)
    elif args.names:
        names = [t.strip() for t in args.names.split(",") if t.strip()]
    try:
        if args.hypothesis2 is not None:
            if names is None:
                raise CliError("--names or --data required with --hypothesis2")
            h2 = analysis.parse_hypothesis(args.hypothesis2, names)
            e = analysis.ast_to_minterms(h2, names)
        else:
            cw, names, threshold = _cell_weights_from_args(args, names)
            scaled = logiccode.scale_weights([cw], threshold, scope=args.scope)[0]
            bt = logiccode.bitcode(scaled, args.bcl_max)
            e = logiccode.level_expression(bt, args.level)
        h = analysis.parse_hypothesis(args.hypothesis, names)
        hbits = analysis.ast_to_minterms(h, names)
    except (analysis.HypothesisSyntaxError, analysis.UnknownAttributeError) as exc:
        raise CliError(str(exc)) from exc
    m = analysis.compare(e, hbits)
    for key in ("v11", "v10", "v01", "v00"):
        print(f"{key}={getattr(m, key)}")
    print(f"accuracy={_fmt(m.accuracy)}")
    print(f"precision={_fmt(m.precision)}" + (" (degenerate)" if m.precision_degenerate else ""))
    print(f"recall={_fmt(m.recall)}" + (" (degenerate)" if m.recall_degenerate else ""))
    print(f"implies_forward={m.implies_forward}")
    print(f"implies_backward={m.implies_backward}")
    print(f"equivalent={m.equivalent}")
    return 0


def cmd_trend(args):
    names_hint = None
    if args.data:
        names_hint, _ = load_dataset(args.data, args.label)
    cw, names, threshold = _cell_weights_from_args(args, names_hint)
    scaled = logiccode.scale_weights([cw], threshold, scope=args.scope)[0]
    bt = logiccode.bitcode(scaled, args.bcl_max)
    vary = _resolve_keep(args.vary, names)
    levels = _parse_levels(args.levels, args.bcl_max)
    fixed = {}
    if args.fixed:
        for part in args.fixed.split(","):
            key, _, val = part.partition("=")
            idx = _resolve_keep(key, names)[0]
            fixed[idx] = float(val)
    try:
        grid = analysis.trend_grid(
            bt, scaled.params, vary, fixed, levels, args.resolution
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    level_tag = "+".join(str(b) for b in levels)
    header = [names[j] for j in vary] + ["level_set", "value"]
    rows = []
    if len(vary) == 1:
        for a, v in zip(grid.axis, grid.values):
            rows.append([repr(float(a)), level_tag, repr(float(v))])
    else:
        for ia, a in enumerate(grid.axis):
            for ib, b in enumerate(grid.axis):
                rows.append(
                    [repr(float(a)), repr(float(b)), level_tag,
                     repr(float(grid.values[ia, ib]))]
                )
    if args.out:
        _write_csv(args.out, header, rows)
        print(f"wrote {len(rows)} grid points to {args.out}")
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(map(str, row)))
    return 0


def cmd_classify(args):
    ann, spec = _load_model(args.model)
    if spec is None:
        raise CliError("model has no fuzzifier; cannot ingest raw data")
    names, samples = load_dataset(args.data, args.label)
    hits = 0
    for s in samples:
        mt = minterm_transform(fuzzify(s.object, spec))
        pred = network.classify(ann, mt)
        print(pred)
        hits += int(pred == s.label)
    if samples:
        print(f"accuracy={_fmt(hits / len(samples))}", file=sys.stderr)
    return 0


def _add_cell_source_args(p, with_scope=True):
    p.add_argument("--model", help="model JSON file")
    p.add_argument("--cell", type=int, help="partition cell number")
    p.add_argument("--weights-override",
                   help="file of raw minterm weights, bypassing extraction")
    p.add_argument("--threshold", type=float,
                   help="classifier threshold when using --weights-override")
    p.add_argument("--data", help="CSV dataset (for attribute names/accuracy)")
    p.add_argument("--label", default="label", help="label column name")
    if with_scope:
        p.add_argument("--scope", choices=["joint", "per-cell"],
                       default="per-cell", help="weight scaling scope")
        p.add_argument("--bcl-max", type=int, default=logiccode.DEFAULT_BCL_MAX)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="annlogic",
        description="Interpret a simple ReLU network as weighted logic expressions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a minterm-input network")
    p.add_argument("--data", required=True)
    p.add_argument("--label", default="label")
    p.add_argument("--model", required=True, help="output model path")
    p.add_argument("--relu-nodes", type=int, default=3)
    p.add_argument("--epochs", type=int, default=2000)
    p.add_argument("--lr", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fuzzifier", choices=["minmax", "logistic"], default="minmax")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("partition", help="partition a dataset into ReLU cells")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--label", default="label")
    p.add_argument("--out", help="CSV output path")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("explain", help="scale, bit-code, and render one cell")
    _add_cell_source_args(p)
    p.add_argument("--out-dir", default="explain_out")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("shapley", help="attribute Shapley values of a cell")
    _add_cell_source_args(p, with_scope=False)
    p.add_argument("--out", help="CSV output path")
    p.set_defaults(func=cmd_shapley)

    p = sub.add_parser("project", help="marginalize a cell onto attributes")
    _add_cell_source_args(p, with_scope=False)
    p.add_argument("--bcl-max", type=int, default=logiccode.DEFAULT_BCL_MAX)
    p.add_argument("--keep", required=True, help="comma-separated attributes")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("hypothesis", help="compare a formula with a level expression")
    _add_cell_source_args(p)
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--hypothesis", required=True)
    p.add_argument("--hypothesis2",
                   help="compare two formulas instead of using a model")
    p.add_argument("--names", help="comma-separated attribute names")
    p.set_defaults(func=cmd_hypothesis)

    p = sub.add_parser("trend", help="trend grid over one or two attributes")
    _add_cell_source_args(p)
    p.add_argument("--vary", required=True, help="one or two attributes")
    p.add_argument("--fixed", help="fixed degrees, e.g. 'c=0.3,e=0.7'")
    p.add_argument("--levels", help="comma-separated level subset")
    p.add_argument("--resolution", type=int, default=21)
    p.add_argument("--out", help="CSV output path")
    p.set_defaults(func=cmd_trend)

    p = sub.add_parser("classify", help="classify dataset rows with a model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--label", default="label")
    p.set_defaults(func=cmd_classify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
