"""Command-line entry points: train, evaluate, explain, serve, synth-data."""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import datagen
from .data import compute_stats, load_dataset, stratified_split
from .errors import CropRecError
from .evaluation import evaluate
from .explain import (CounterfactualConfig, counterfactual_delta_report,
                      counterfactual_search, gain_importance, lime_explain,
                      path_contributions, permutation_importance,
                      sample_background, shapley_exact, shapley_kernel)
from .explain.lime import LimeConfig
from .models import (ModelKind, default_grid, default_params, grid_search,
                     load_model, params_from_dict, save_model, train_model)
from .render import (render_attribution, render_delta_table, render_lime,
                     render_report)
from .service import ServiceConfig, serve

EXPLAIN_METHODS = ("permutation", "gain", "path", "shap-exact", "shap-kernel",
                   "lime", "counterfactual")


def _require_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        print(f"error: file not found: {path}", file=sys.stderr)
        raise SystemExit(2)
    return p


def _parse_sample(text: str) -> np.ndarray:
    try:
        values = np.array([float(v) for v in text.split(",")], dtype=np.float64)
    except ValueError:
        print(f"error: sample must be 7 comma-separated numbers, got '{text}'", file=sys.stderr)
        raise SystemExit(2)
    if values.shape != (7,):
        print(f"error: sample must have 7 values, got {len(values)}", file=sys.stderr)
        raise SystemExit(2)
    return values


def cmd_synth_data(args) -> int:
    ds = datagen.generate_dataset(rows_per_class=args.rows_per_class, seed=args.seed)
    datagen.write_csv(ds, args.out)
    print(f"wrote {ds.n_samples} rows x {ds.n_classes} crops to {args.out}")
    return 0


def cmd_train(args) -> int:
    data_path = _require_file(args.data)
    dataset = load_dataset(data_path)
    train, test = stratified_split(dataset, args.test_fraction, args.seed)
    kind = ModelKind.parse(args.kind)
    if args.grid:
        grid = default_grid(kind)
        print(f"grid search over {len(grid)} candidates, {args.folds} folds...")
        result = grid_search(kind, grid, train, folds=args.folds, seed=args.seed)
        params = result.best
        print(f"best parameters: {params}")
    elif args.params:
        params = params_from_dict(kind, json.loads(args.params))
    else:
        params = default_params(kind)
    model = train_model(kind, params, train, seed=args.seed)
    report = evaluate(model, test)
    print(render_report(report, model_name=kind.value.upper()))
    save_model(model, args.out, created_at=datetime.now(timezone.utc).isoformat())
    print(f"\nartifact written to {args.out}")
    if args.background_out:
        datagen.write_csv(train, args.background_out)
        print(f"training split written to {args.background_out} (serves as background set)")
    return 0


def cmd_evaluate(args) -> int:
    model = load_model(_require_file(args.model))
    dataset = load_dataset(_require_file(args.data))
    report = evaluate(model, dataset)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(render_report(report, model_name=model.kind.value.upper()))
    return 0


def cmd_explain(args) -> int:
    model = load_model(_require_file(args.model))
    sample = _parse_sample(args.sample)
    method = args.method
    needs_background = method in ("permutation", "shap-exact", "shap-kernel",
                                  "lime", "counterfactual")
    background = stats = None
    if needs_background:
        if not args.background:
            print(f"error: --background CSV is required for method '{method}'", file=sys.stderr)
            return 2
        full = load_dataset(_require_file(args.background))
        stats = compute_stats(full)
        background = sample_background(full, 100, seed=args.seed)

    target = args.target if args.target else model.predict_label(sample)

    if method == "permutation":
        out = permutation_importance(model, background, repeats=5, seed=args.seed)
    elif method == "gain":
        out = gain_importance(model)
    elif method == "path":
        out = path_contributions(model, sample, target)
    elif method == "shap-exact":
        out = shapley_exact(model, sample, background, target)
    elif method == "shap-kernel":
        out = shapley_kernel(model, sample, background, target, seed=args.seed)
    elif method == "lime":
        out = lime_explain(model, sample, stats, LimeConfig(seed=args.seed), target)
        print(json.dumps(out.to_dict(), indent=2) if args.json else render_lime(out))
        return 0
    else:
        config = CounterfactualConfig(
            target_class=target,
            count=args.count,
            immutable=tuple(args.immutable.split(",")) if args.immutable else ("temperature", "ph"),
            seed=args.seed,
        )
        result = counterfactual_search(model, sample, config, stats)
        if args.json:
            print(json.dumps(result.to_dict(), indent=2))
        elif result.found:
            report = counterfactual_delta_report(sample, result.counterfactuals,
                                                 model.schema.names)
            print(render_delta_table(report))
        else:
            print(f"no counterfactual found for target '{target}'")
        return 0 if result.found else 1
    print(json.dumps(out.to_dict(), indent=2) if args.json else render_attribution(out))
    return 0


def cmd_serve(args) -> int:
    config = ServiceConfig.from_env(
        model_path=str(_require_file(args.model)),
        background_path=str(_require_file(args.background)),
        host=args.host,
        port=args.port,
        cors_origins=tuple(args.cors) if args.cors else (),
        static_dir=args.static,
    )
    serve(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="croprec",
                                     description="explainable crop recommendation engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth-data", help="write the offline stand-in dataset as CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--rows-per-class", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_synth_data)

    p = sub.add_parser("train", help="train one model and write its artifact")
    p.add_argument("--data", required=True, help="crop CSV path")
    p.add_argument("--kind", required=True, choices=[k.value for k in ModelKind])
    p.add_argument("--params", help="hyperparameters as a JSON object")
    p.add_argument("--grid", action="store_true", help="grid-search instead of defaults")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--test-fraction", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True, help="artifact output path")
    p.add_argument("--background-out", help="also write the training split as CSV")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="score an artifact against a labeled CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("explain", help="explain a prediction or the model globally")
    p.add_argument("--model", required=True)
    p.add_argument("--method", required=True, choices=EXPLAIN_METHODS)
    p.add_argument("--sample", required=True, help="7 comma-separated feature values")
    p.add_argument("--target", help="target crop (defaults to the prediction)")
    p.add_argument("--background", help="labeled CSV for background/statistics")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=3, help="counterfactuals to request")
    p.add_argument("--immutable", help="comma-separated immutable features")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("serve", help="run the HTTP JSON service")
    p.add_argument("--model", required=True)
    p.add_argument("--background", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--cors", nargs="*", help="allowed CORS origins")
    p.add_argument("--static", help="directory of web UI assets to serve at /")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CropRecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
