"""Plain-text dataset and model files.

Both formats are a key-value header, a `---` separator, then CSV-style
rows. Floats are written with repr(), which round-trips binary-exactly,
so write -> read -> write reproduces the file byte for byte. A sha256
digest of the row block ties models to the dataset they were trained on.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .channels import ChannelKind
from .errors import FormatError
from .nonmarkov import NmGridConfig
from .training import LabeledDataset
from .vqc import Backend, VqcConfig, VqcParams

DATASET_MAGIC = "nmprobe-dataset v1"
MODEL_MAGIC = "nmprobe-model v1"


def _fmt(x: float) -> str:
    return repr(float(x))


def _digest(payload: str) -> str:
    return "sha256:" + hashlib.sha256(payload.encode()).hexdigest()


def _dataset_rows(ds: LabeledDataset) -> str:
    lines = ["x,y"]
    lines += [f"{_fmt(x)},{_fmt(y)}" for x, y in zip(ds.xs, ds.ys)]
    return "\n".join(lines) + "\n"


def dataset_digest(ds: LabeledDataset) -> str:
    return _digest(_dataset_rows(ds))


def save_dataset(path: str, ds: LabeledDataset) -> str:
    """Write the dataset; returns its digest."""
    if ds.seed is None:
        raise FormatError("dataset files require a generation seed")
    grid = ds.grid or NmGridConfig()
    rows = _dataset_rows(ds)
    dig = _digest(rows)
    header = [
        DATASET_MAGIC,
        f"kind: {ds.kind.value}",
        f"lo: {_fmt(ds.lo)}",
        f"hi: {_fmt(ds.hi)}",
        f"count: {len(ds)}",
        f"seed: {ds.seed}",
        f"t_max: {'default' if grid.t_max is None else _fmt(grid.t_max)}",
        f"n_steps: {grid.n_steps}",
        f"refine_tol: {_fmt(grid.refine_tol)}",
        f"digest: {dig}",
        "---",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(header) + "\n" + rows)
    return dig


def _parse_header(lines: list[str], magic: str, path: str) -> tuple[dict, int]:
    if not lines or lines[0].strip() != magic:
        raise FormatError(f"{path}: not a '{magic}' file")
    fields = {}
    for i, line in enumerate(lines[1:], start=1):
        if line.strip() == "---":
            return fields, i + 1
        if ":" not in line:
            raise FormatError(f"{path}: malformed header line {line!r}")
        key, _, val = line.partition(":")
        fields[key.strip()] = val.strip()
    raise FormatError(f"{path}: missing '---' separator")


def load_dataset(path: str) -> LabeledDataset:
    with open(path) as fh:
        lines = fh.read().splitlines()
    fields, body_at = _parse_header(lines, DATASET_MAGIC, path)
    try:
        kind = ChannelKind(fields["kind"])
        lo = float(fields["lo"])
        hi = float(fields["hi"])
        count = int(fields["count"])
        seed = int(fields["seed"])
        t_max = None if fields["t_max"] == "default" else float(fields["t_max"])
        grid = NmGridConfig(t_max=t_max, n_steps=int(fields["n_steps"]),
                            refine_tol=float(fields["refine_tol"]))
        stored = fields["digest"]
    except KeyError as exc:
        raise FormatError(f"{path}: missing header field {exc}") from exc
    body = lines[body_at:]
    if not body or body[0] != "x,y":
        raise FormatError(f"{path}: missing 'x,y' column row")
    rows = _digest("\n".join(body) + "\n")
    if rows != stored:
        raise FormatError(f"{path}: digest mismatch (file edited or truncated?)")
    xs, ys = [], []
    for line in body[1:]:
        a, _, b = line.partition(",")
        xs.append(float(a))
        ys.append(float(b))
    if len(xs) != count:
        raise FormatError(f"{path}: row count {len(xs)} != declared {count}")
    return LabeledDataset(kind, np.array(xs), np.array(ys), split="full",
                          lo=lo, hi=hi, seed=seed, grid=grid)


def save_model(path: str, cfg: VqcConfig, params: VqcParams, *,
               dataset_digest: str, train_mse: float, test_mse: float,
               seed: int, restart_index: int, epochs_used: int) -> None:
    lines = [
        MODEL_MAGIC,
        f"kind: {cfg.kind.value}",
        f"n_interactions: {cfg.n_interactions}",
        f"backend: {cfg.backend.value}",
    ]
    lines += [f"phi_{i}: {_fmt(v)}" for i, v in enumerate(params.phis)]
    lines += [f"t_{i + 1}: {_fmt(v)}" for i, v in enumerate(params.times)]
    lines += [
        f"w0: {_fmt(params.w0)}",
        f"w1: {_fmt(params.w1)}",
        f"dataset_digest: {dataset_digest}",
        f"train_mse: {_fmt(train_mse)}",
        f"test_mse: {_fmt(test_mse)}",
        f"seed: {seed}",
        f"restart_index: {restart_index}",
        f"epochs_used: {epochs_used}",
        "---",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path: str) -> tuple[VqcConfig, VqcParams, dict]:
    with open(path) as fh:
        lines = fh.read().splitlines()
    fields, _ = _parse_header(lines, MODEL_MAGIC, path)
    try:
        kind = ChannelKind(fields["kind"])
        n = int(fields["n_interactions"])
        cfg = VqcConfig(kind, n, Backend(fields["backend"]))
        params = VqcParams(
            phis=np.array([float(fields[f"phi_{i}"]) for i in range(n + 1)]),
            times=np.array([float(fields[f"t_{i + 1}"]) for i in range(n)]),
            w0=float(fields["w0"]), w1=float(fields["w1"]))
        meta = {
            "dataset_digest": fields["dataset_digest"],
            "train_mse": float(fields["train_mse"]),
            "test_mse": float(fields["test_mse"]),
            "seed": int(fields["seed"]),
            "restart_index": int(fields["restart_index"]),
            "epochs_used": int(fields["epochs_used"]),
        }
    except KeyError as exc:
        raise FormatError(f"{path}: missing model field {exc}") from exc
    return cfg, params, meta


def save_history(path: str, history: list[float]) -> None:
    with open(path, "w") as fh:
        fh.write("epoch,cost\n")
        for i, c in enumerate(history):
            fh.write(f"{i},{_fmt(c)}\n")


def load_history(path: str) -> list[float]:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != "epoch,cost":
        raise FormatError(f"{path}: not a history file")
    return [float(line.partition(",")[2]) for line in lines[1:]]
