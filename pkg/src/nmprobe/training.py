"""Dataset generation and supervised training of the estimator circuit.

Training is full-batch Adagrad over the packed parameter vector
[phi_0..phi_N, u_1..u_N, w0, w1], where u_i is the unconstrained
reparametrization of the interaction time t_i = softplus(u_i). Multiple
random restarts guard against the nonconvex angle/time landscape; the
best restart wins.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import kernels, nonmarkov
from .channels import WORKING_RANGE, ChannelKind
from .errors import ConvergenceError, ValidationError
from .nonmarkov import NmGridConfig
from .vqc import VqcConfig, VqcParams

KIND_CODE = {
    ChannelKind.AMPLITUDE_DAMPING: kernels.KIND_AD,
    ChannelKind.PHASE_DAMPING: kernels.KIND_PD,
}

# initial time draws need to cover the slower memory oscillations of the
# amplitude-damping channel; phase-damping dynamics live on shorter spans
_T_INIT_HI = {
    ChannelKind.AMPLITUDE_DAMPING: 12.0,
    ChannelKind.PHASE_DAMPING: 5.0,
}


@dataclass
class LabeledDataset:
    kind: ChannelKind
    xs: np.ndarray
    ys: np.ndarray
    split: str = "full"
    lo: float | None = None
    hi: float | None = None
    seed: int | None = None
    grid: NmGridConfig | None = None

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.ys = np.asarray(self.ys, dtype=float)
        if len(self.xs) != len(self.ys):
            raise ValidationError("feature and label counts differ")
        if len(self.xs) == 0:
            raise ValidationError("dataset is empty")
        if self.split not in ("full", "train", "test"):
            raise ValidationError(f"unknown split tag {self.split!r}")
        if not (np.all(np.isfinite(self.xs)) and np.all(np.isfinite(self.ys))):
            raise ValidationError("features and labels must be finite")
        lo, hi = WORKING_RANGE[self.kind]
        if np.any(self.xs < lo) or np.any(self.xs > hi):
            raise ValidationError(
                f"features outside the {self.kind.value} working range [{lo}, {hi}]")
        if np.any(self.ys < 0):
            raise ValidationError("labels must be non-negative")

    def __len__(self) -> int:
        return len(self.xs)


def _label_one(args):
    kind, x, cfg = args
    return nonmarkov.nm_measure(kind, x, cfg)


def generate_dataset(kind: ChannelKind, n: int, value_range: tuple[float, float],
                     seed: int, cfg: NmGridConfig | None = None,
                     workers: int | None = None) -> LabeledDataset:
    """Draw n channel parameters uniformly and label them with the measure.

    Deterministic for a given seed. `workers` > 1 distributes labeling
    over processes; default comes from NMPROBE_WORKERS (1 if unset).
    """
    lo, hi = value_range
    if n < 1:
        raise ValidationError("need at least one sample")
    if not lo < hi:
        raise ValidationError("range must satisfy lo < hi")
    wlo, whi = WORKING_RANGE[kind]
    if lo < wlo or hi > whi:
        raise ValidationError(
            f"range [{lo}, {hi}] exceeds the {kind.value} working range [{wlo}, {whi}]")
    cfg = cfg or NmGridConfig()
    rng = np.random.default_rng(seed)
    xs = rng.uniform(lo, hi, n)
    if workers is None:
        workers = int(os.environ.get("NMPROBE_WORKERS", "1"))
    if workers > 1:
        import multiprocessing

        with multiprocessing.Pool(workers) as pool:
            ys = np.array(pool.map(_label_one, [(kind, float(x), cfg) for x in xs]))
    else:
        ys = np.array([nonmarkov.nm_measure(kind, float(x), cfg) for x in xs])
    return LabeledDataset(kind, xs, ys, split="full",
                          lo=float(lo), hi=float(hi), seed=seed, grid=cfg)


def split_dataset(ds: LabeledDataset,
                  train_frac: float = 0.8) -> tuple[LabeledDataset, LabeledDataset]:
    """Head/tail split; the draws are i.i.d. so no shuffle is needed."""
    if not 0.0 < train_frac < 1.0:
        raise ValidationError("train fraction must be in (0, 1)")
    cut = int(round(len(ds) * train_frac))
    if cut == 0 or cut == len(ds):
        raise ValidationError("split leaves one side empty")
    mk = lambda sl, tag: LabeledDataset(ds.kind, ds.xs[sl], ds.ys[sl], split=tag,
                                        lo=ds.lo, hi=ds.hi, seed=ds.seed, grid=ds.grid)
    return mk(slice(0, cut), "train"), mk(slice(cut, None), "test")


def softplus_inv(t):
    """Inverse of softplus; exact for large t where expm1 would overflow."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValidationError("time reparametrization needs positive times")
    with np.errstate(over="ignore"):
        out = np.where(t > 30.0, t, np.log(np.expm1(np.minimum(t, 30.0))))
    return out


def params_to_vector(params: VqcParams) -> np.ndarray:
    return np.concatenate([params.phis, softplus_inv(params.times),
                           [params.w0, params.w1]])


def vector_to_params(vec: np.ndarray, n_interactions: int) -> VqcParams:
    n = n_interactions
    return VqcParams(phis=vec[:n + 1].copy(),
                     times=kernels.softplus(vec[n + 1:2 * n + 1]),
                     w0=float(vec[-2]), w1=float(vec[-1]))


def mse(cfg: VqcConfig, params: VqcParams, ds: LabeledDataset) -> float:
    if ds.kind is not cfg.kind:
        raise ValidationError("dataset channel does not match the circuit")
    z = kernels.forward_batch(KIND_CODE[cfg.kind], params.phis, params.times, ds.xs)
    r = params.w0 + params.w1 * z - ds.ys
    return float(np.mean(r * r))


def gradient(cfg: VqcConfig, params: VqcParams, ds: LabeledDataset,
             h: float = 1e-5) -> np.ndarray:
    """Gradient in vector layout [phis..., u..., w0, w1].

    The readout weights are exact (cost is quadratic in them); angles and
    time reparametrizations use central differences with step h.
    """
    if ds.kind is not cfg.kind:
        raise ValidationError("dataset channel does not match the circuit")
    u = softplus_inv(params.times)
    _, g = kernels.epoch_grad(KIND_CODE[cfg.kind], params.phis, u,
                              params.w0, params.w1, ds.xs, ds.ys, h)
    return g


@dataclass
class AdagradState:
    eta: float
    eps: float
    accum: np.ndarray  # per-parameter sum of squared gradients

    def __post_init__(self):
        self.accum = np.asarray(self.accum, dtype=float)


def adagrad_step(state: AdagradState, vec: np.ndarray,
                 g: np.ndarray) -> np.ndarray:
    """One Adagrad update; mutates state.accum, returns the new vector."""
    state.accum += g * g
    return vec - state.eta * g / np.sqrt(state.accum + state.eps)


@dataclass(frozen=True)
class Hyper:
    eta: float = 0.5
    eps: float = 1e-8
    h: float = 1e-5
    max_epochs: int = 30000
    restarts: int = 10
    patience: int = 800
    min_improvement: float = 1e-10
    seed: int = 0
    t_init_hi: float | None = None  # None: channel-dependent default

    def __post_init__(self):
        if self.eta <= 0 or self.eps <= 0 or self.h <= 0:
            raise ValidationError("eta, eps and h must be positive")
        if self.max_epochs < 1 or self.restarts < 1 or self.patience < 1:
            raise ValidationError("epoch, restart and patience counts must be >= 1")


@dataclass
class TrainReport:
    params: VqcParams
    best_cost: float
    cost_history: list[float]
    seed: int
    restart_index: int
    epochs_used: int
    restart_costs: list[float] = field(default_factory=list)
    test_mse: float | None = None


def _init_vector(cfg: VqcConfig, hyper: Hyper, rng: np.random.Generator) -> np.ndarray:
    n = cfg.n_interactions
    phis = rng.uniform(0.0, np.pi, n + 1)
    t_hi = hyper.t_init_hi if hyper.t_init_hi is not None else _T_INIT_HI[cfg.kind]
    # descending times: a long first interaction probes the slow memory
    # oscillation, later short ones refine - empirically this lands in the
    # good optimization basin far more often than unordered draws
    times = np.sort(rng.uniform(0.5, t_hi, n))[::-1]
    return np.concatenate([phis, softplus_inv(times), [0.0, 1.0]])


def train(cfg: VqcConfig, ds_train: LabeledDataset, hyper: Hyper) -> TrainReport:
    """Best-of-`restarts` full-batch Adagrad fit."""
    if ds_train.kind is not cfg.kind:
        raise ValidationError("dataset channel does not match the circuit")
    kind_code = KIND_CODE[cfg.kind]
    n = cfg.n_interactions
    best: TrainReport | None = None
    restart_costs: list[float] = []

    for r in range(hyper.restarts):
        rng = np.random.default_rng([hyper.seed, r])
        vec = _init_vector(cfg, hyper, rng)
        state = AdagradState(eta=hyper.eta, eps=hyper.eps,
                             accum=np.zeros_like(vec))
        history: list[float] = []
        best_c = np.inf
        best_vec = vec.copy()
        stale = 0
        for _ in range(hyper.max_epochs):
            c, g = kernels.epoch_grad(kind_code, vec[:n + 1], vec[n + 1:2 * n + 1],
                                      float(vec[-2]), float(vec[-1]),
                                      ds_train.xs, ds_train.ys, hyper.h)
            if not np.isfinite(c):
                break
            history.append(c)
            if c < best_c - hyper.min_improvement:
                best_c, best_vec, stale = c, vec.copy(), 0
            else:
                stale += 1
                if stale >= hyper.patience:
                    break
            vec = adagrad_step(state, vec, g)
        if not np.isfinite(best_c):
            restart_costs.append(np.inf)
            continue
        restart_costs.append(best_c)
        if best is None or best_c < best.best_cost:
            best = TrainReport(params=vector_to_params(best_vec, n),
                               best_cost=float(best_c), cost_history=history,
                               seed=hyper.seed, restart_index=r,
                               epochs_used=len(history))
    if best is None:
        raise ConvergenceError("all restarts diverged to non-finite cost")
    best.restart_costs = restart_costs
    return best


@dataclass
class EvalResult:
    mse: float
    residuals: np.ndarray  # prediction minus label, per point


def evaluate(cfg: VqcConfig, params: VqcParams, ds: LabeledDataset) -> EvalResult:
    if ds.kind is not cfg.kind:
        raise ValidationError("dataset channel does not match the circuit")
    z = kernels.forward_batch(KIND_CODE[cfg.kind], params.phis, params.times, ds.xs)
    res = params.w0 + params.w1 * z - ds.ys
    return EvalResult(mse=float(np.mean(res * res)), residuals=res)
