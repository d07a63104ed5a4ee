"""On-disk formats: round trips, tamper detection, malformed input."""

import numpy as np
import pytest

from nmprobe.channels import ChannelKind
from nmprobe.errors import FormatError
from nmprobe.files import (dataset_digest, load_dataset, load_history,
                           load_model, save_dataset, save_history, save_model)
from nmprobe.nonmarkov import NmGridConfig
from nmprobe.training import LabeledDataset
from nmprobe.vqc import VqcConfig, VqcParams

AD = ChannelKind.AMPLITUDE_DAMPING
PD = ChannelKind.PHASE_DAMPING


def _dataset():
    rng = np.random.default_rng(13)
    xs = rng.uniform(0.1, 3.0, 17)
    ys = rng.uniform(0.0, 2.0, 17)
    return LabeledDataset(AD, xs, ys, lo=0.1, hi=3.0, seed=13,
                          grid=NmGridConfig(t_max=25.0, n_steps=2000, refine_tol=1e-6))


def test_dataset_round_trip_is_exact(tmp_path):
    ds = _dataset()
    p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
    dig = save_dataset(p1, ds)
    back = load_dataset(p1)
    assert np.array_equal(back.xs, ds.xs)
    assert np.array_equal(back.ys, ds.ys)
    assert (back.kind, back.lo, back.hi, back.seed) == (AD, 0.1, 3.0, 13)
    assert (back.grid.t_max, back.grid.n_steps, back.grid.refine_tol) == (25.0, 2000, 1e-6)
    assert dig == dataset_digest(ds)
    save_dataset(p2, back)
    assert p1.read_bytes() == p2.read_bytes()


def test_dataset_default_horizon_survives_round_trip(tmp_path):
    ds = LabeledDataset(PD, np.array([0.5]), np.array([0.2]), lo=0.1, hi=0.75,
                        seed=0, grid=NmGridConfig())
    path = tmp_path / "d.txt"
    save_dataset(path, ds)
    assert load_dataset(path).grid.t_max is None


def test_dataset_requires_seed(tmp_path):
    ds = LabeledDataset(AD, np.array([1.0]), np.array([0.1]))
    with pytest.raises(FormatError):
        save_dataset(tmp_path / "d.txt", ds)


def test_tampered_row_is_rejected(tmp_path):
    path = tmp_path / "d.txt"
    save_dataset(path, _dataset())
    text = path.read_text()
    body = text.index("x,y")
    # flip one digit inside the row block
    k = text.index("7", body)
    path.write_text(text[:k] + "8" + text[k + 1:])
    with pytest.raises(FormatError, match="digest"):
        load_dataset(path)


def test_truncated_file_is_rejected(tmp_path):
    path = tmp_path / "d.txt"
    save_dataset(path, _dataset())
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(FormatError):
        load_dataset(path)


def test_wrong_magic_is_rejected(tmp_path):
    path = tmp_path / "d.txt"
    path.write_text("some other format v9\n---\nx,y\n")
    with pytest.raises(FormatError, match="not a"):
        load_dataset(path)
    with pytest.raises(FormatError):
        load_model(path)


def test_missing_separator_is_rejected(tmp_path):
    path = tmp_path / "d.txt"
    path.write_text("nmprobe-dataset v1\nkind: ad\n")
    with pytest.raises(FormatError, match="separator"):
        load_dataset(path)


def test_model_round_trip_is_exact(tmp_path):
    cfg = VqcConfig(PD, 2)
    params = VqcParams(phis=np.array([0.1, -2.3, 3.07]),
                       times=np.array([1.5, 0.25]), w0=-0.125, w1=1.875)
    p1, p2 = tmp_path / "m1.txt", tmp_path / "m2.txt"
    save_model(p1, cfg, params, dataset_digest="sha256:ab12", train_mse=3e-5,
               test_mse=4e-5, seed=3, restart_index=7, epochs_used=4096)
    cfg2, params2, meta = load_model(p1)
    assert (cfg2.kind, cfg2.n_interactions, cfg2.backend) == (cfg.kind, 2, cfg.backend)
    assert np.array_equal(params2.phis, params.phis)
    assert np.array_equal(params2.times, params.times)
    assert (params2.w0, params2.w1) == (params.w0, params.w1)
    assert meta == {"dataset_digest": "sha256:ab12", "train_mse": 3e-5,
                    "test_mse": 4e-5, "seed": 3, "restart_index": 7,
                    "epochs_used": 4096}
    save_model(p2, cfg2, params2, **meta)
    assert p1.read_bytes() == p2.read_bytes()


def test_model_missing_field_is_rejected(tmp_path):
    path = tmp_path / "m.txt"
    save_model(path, VqcConfig(AD, 1), VqcParams(phis=np.zeros(2), times=np.ones(1)),
               dataset_digest="sha256:00", train_mse=0.0, test_mse=0.0,
               seed=0, restart_index=0, epochs_used=1)
    lines = [l for l in path.read_text().splitlines() if not l.startswith("w1:")]
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(FormatError, match="missing model field"):
        load_model(path)


def test_history_round_trip(tmp_path):
    path = tmp_path / "h.csv"
    hist = [0.5, 0.25, 0.12500000000000003, 1e-300]
    save_history(path, hist)
    assert load_history(path) == hist
    path.write_text("cost\n0.5\n")
    with pytest.raises(FormatError):
        load_history(path)
