"""Command-line pipeline driver.

Subcommands: labels (measure sweep to CSV), dataset (random labeled
dataset file), train (fit the circuit), eval (predictions vs targets,
CSV and optional SVG chart).

A JSON config file can preload any flag defaults (--config, keys use
underscore names like "n_interactions"); explicit flags win. Exit
codes: 0 ok, 2 validation, 3 numerical failure, 4 I/O.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import chart, files, kernels, nonmarkov, training
from .channels import WORKING_RANGE, ChannelKind
from .errors import ConvergenceError, ValidationError
from .nonmarkov import NmGridConfig
from .training import KIND_CODE, Hyper
from .vqc import VqcConfig


def _grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t-max", type=float, default=None,
                   help="integration horizon (default: channel-dependent)")
    p.add_argument("--n-steps", type=int, default=4000,
                   help="base grid steps (default 4000)")
    p.add_argument("--refine-tol", type=float, default=1e-6,
                   help="grid-halving convergence tolerance (default 1e-6)")


def _grid_from(args) -> NmGridConfig:
    return NmGridConfig(t_max=args.t_max, n_steps=args.n_steps,
                        refine_tol=args.refine_tol)


def _workers(args) -> int:
    if getattr(args, "workers", None):
        return args.workers
    return int(os.environ.get("NMPROBE_WORKERS", "1"))


def _require(args, *names: str) -> None:
    # required-flag checks happen after parsing so a --config file can
    # supply any of them
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise ValidationError(f"missing required flag(s): {flags}")


def _check_range(kind: ChannelKind, lo: float, hi: float) -> None:
    if not lo < hi:
        raise ValidationError("range must satisfy lo < hi")
    wlo, whi = WORKING_RANGE[kind]
    if lo < wlo or hi > whi:
        raise ValidationError(f"range [{lo}, {hi}] exceeds the {kind.value} "
                              f"working range [{wlo}, {whi}]")


def _sweep_labels(kind: ChannelKind, xs: np.ndarray, cfg: NmGridConfig,
                  workers: int) -> np.ndarray:
    if workers > 1:
        import multiprocessing

        with multiprocessing.Pool(workers) as pool:
            return np.array(pool.map(training._label_one,
                                     [(kind, float(x), cfg) for x in xs]))
    return np.array([nonmarkov.nm_measure(kind, float(x), cfg) for x in xs])


def cmd_labels(args) -> int:
    _require(args, "kind", "lo", "hi", "count", "out")
    kind = ChannelKind(args.kind)
    _check_range(kind, args.lo, args.hi)
    if args.count < 1:
        raise ValidationError("count must be at least 1")
    cfg = _grid_from(args)
    xs = np.linspace(args.lo, args.hi, args.count)
    ys = _sweep_labels(kind, xs, cfg, _workers(args))
    with open(args.out, "w") as fh:
        fh.write("x,nm\n")
        for x, y in zip(xs, ys):
            fh.write(f"{x:.12g},{y:.12g}\n")
    print(f"wrote {len(xs)} labels to {args.out}")
    return 0


def cmd_dataset(args) -> int:
    _require(args, "kind", "lo", "hi", "count", "seed", "out")
    kind = ChannelKind(args.kind)
    ds = training.generate_dataset(kind, args.count, (args.lo, args.hi),
                                   seed=args.seed, cfg=_grid_from(args),
                                   workers=_workers(args))
    dig = files.save_dataset(args.out, ds)
    print(f"wrote {len(ds)} samples to {args.out} ({dig[:15]}...)")
    return 0


def cmd_train(args) -> int:
    _require(args, "dataset", "out")
    ds = files.load_dataset(args.dataset)
    ds_train, ds_test = training.split_dataset(ds, args.train_frac)
    cfg = VqcConfig(ds.kind, args.n_interactions)
    hyper = Hyper(eta=args.eta, eps=args.eps, h=args.fd_step,
                  max_epochs=args.max_epochs, restarts=args.restarts,
                  patience=args.patience, seed=args.seed,
                  t_init_hi=args.t_init_hi)
    report = training.train(cfg, ds_train, hyper)
    test = training.evaluate(cfg, report.params, ds_test)
    files.save_model(args.out, cfg, report.params,
                     dataset_digest=files.dataset_digest(ds),
                     train_mse=report.best_cost, test_mse=test.mse,
                     seed=hyper.seed, restart_index=report.restart_index,
                     epochs_used=report.epochs_used)
    history_path = args.history or args.out + ".history.csv"
    files.save_history(history_path, report.cost_history)
    print(f"train mse {report.best_cost:.6e}  test mse {test.mse:.6e}  "
          f"(restart {report.restart_index}, {report.epochs_used} epochs, "
          f"{kernels.backend_name()} kernel)")
    print(f"model: {args.out}  history: {history_path}")
    return 0


def _parse_sweep(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError("sweep must look like lo:hi:count")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ValidationError(f"bad sweep {text!r}: {exc}") from exc
    if count < 2:
        raise ValidationError("sweep needs at least 2 points")
    return lo, hi, count


def cmd_eval(args) -> int:
    _require(args, "model", "out")
    cfg, params, _meta = files.load_model(args.model)
    if bool(args.dataset) == bool(args.sweep):
        raise ValidationError("provide exactly one of --dataset or --sweep")
    grid = _grid_from(args)
    if args.dataset:
        ds = files.load_dataset(args.dataset)
        if ds.kind is not cfg.kind:
            raise ValidationError(
                f"model is for {cfg.kind.value!r} but dataset is {ds.kind.value!r}")
        order = np.argsort(ds.xs)
        xs, targets = ds.xs[order], ds.ys[order]
    else:
        lo, hi, count = _parse_sweep(args.sweep)
        _check_range(cfg.kind, lo, hi)
        xs = np.linspace(lo, hi, count)
        targets = _sweep_labels(cfg.kind, xs, grid, _workers(args))
    z = kernels.forward_batch(KIND_CODE[cfg.kind], params.phis, params.times, xs)
    preds = params.w0 + params.w1 * z
    with open(args.out, "w") as fh:
        fh.write("x,target,prediction\n")
        for x, t, p in zip(xs, targets, preds):
            fh.write(f"{x:.12g},{t:.12g},{p:.12g}\n")
    if args.svg:
        svg = chart.svg_line_chart(
            xs, [("target", targets, True), ("prediction", preds, False)],
            title=f"{cfg.kind.value} estimator ({cfg.n_interactions} interactions)",
            x_label="channel parameter", y_label="memory measure")
        with open(args.svg, "w") as fh:
            fh.write(svg)
    dev = float(np.max(np.abs(preds - targets)))
    mse = float(np.mean((preds - targets) ** 2))
    print(f"wrote {len(xs)} rows to {args.out}  "
          f"(mse {mse:.6e}, max abs deviation {dev:.4f})")
    return 0


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    top = argparse.ArgumentParser(
        prog="nmprobe",
        description="simulate qubit noise channels, quantify their memory, "
                    "and train a small circuit to estimate it")
    sub = top.add_subparsers(dest="command", required=True)
    parsers: dict[str, argparse.ArgumentParser] = {}

    p = parsers["labels"] = sub.add_parser(
        "labels", help="sweep the measure over a parameter range")
    p.add_argument("--kind", choices=["ad", "pd"], default=None)
    p.add_argument("--lo", type=float, default=None)
    p.add_argument("--hi", type=float, default=None)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--config", default=None, help="JSON file with flag defaults")
    _grid_flags(p)
    p.set_defaults(func=cmd_labels)

    p = parsers["dataset"] = sub.add_parser(
        "dataset", help="generate a labeled random dataset file")
    p.add_argument("--kind", choices=["ad", "pd"], default=None)
    p.add_argument("--lo", type=float, default=None)
    p.add_argument("--hi", type=float, default=None)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--seed", type=int, default=None,
                   help="generation seed (required for reproducibility)")
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--config", default=None, help="JSON file with flag defaults")
    _grid_flags(p)
    p.set_defaults(func=cmd_dataset)

    p = parsers["train"] = sub.add_parser(
        "train", help="fit the estimator circuit to a dataset")
    p.add_argument("--dataset", default=None)
    p.add_argument("--n-interactions", type=int, default=2)
    p.add_argument("--out", default=None, help="model file path")
    p.add_argument("--history", default=None,
                   help="cost history CSV (default: <model>.history.csv)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eta", type=float, default=0.5)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--fd-step", type=float, default=1e-5)
    p.add_argument("--max-epochs", type=int, default=30000)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--patience", type=int, default=800)
    p.add_argument("--train-frac", type=float, default=0.8)
    p.add_argument("--t-init-hi", type=float, default=None,
                   help="upper end of the initial time draws "
                        "(default: channel-dependent)")
    p.add_argument("--config", default=None, help="JSON file with flag defaults")
    p.set_defaults(func=cmd_train)

    p = parsers["eval"] = sub.add_parser(
        "eval", help="evaluate a saved model")
    p.add_argument("--model", default=None)
    p.add_argument("--dataset", default=None)
    p.add_argument("--sweep", default=None, help="lo:hi:count")
    p.add_argument("--out", default=None, help="CSV output path")
    p.add_argument("--svg", default=None, help="optional chart output path")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--config", default=None, help="JSON file with flag defaults")
    _grid_flags(p)
    p.set_defaults(func=cmd_eval)

    return top, parsers


def _apply_config_file(parsers: dict[str, argparse.ArgumentParser],
                       argv: list[str]) -> None:
    path = None
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif a.startswith("--config="):
            path = a.split("=", 1)[1]
    if path is None:
        return
    with open(path) as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(cfg, dict):
        raise ValidationError(f"{path}: config must be a JSON object")
    known: set[str] = set()
    for sp in parsers.values():
        known |= {a.dest for a in sp._actions}
    bad = set(cfg) - known
    if bad:
        raise ValidationError(f"{path}: unknown config keys {sorted(bad)}")
    if not argv or argv[0] not in parsers:
        return
    # a config file may hold keys for several subcommands; feed the
    # invoked one only the keys it understands. set_defaults rewrites
    # the action defaults, so explicit flags still override.
    sp = parsers[argv[0]]
    dests = {a.dest for a in sp._actions}
    sp.set_defaults(**{k: v for k, v in cfg.items() if k in dests})


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    top, parsers = build_parser()
    try:
        _apply_config_file(parsers, argv)
        args = top.parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
