"""The trainable estimator circuit.

One system qubit alternates between y-rotations and channel interactions
of trainable duration; the final sigma_z expectation feeds a linear
readout. Two equivalent simulation backends exist:

* KRAUS_RESET: the channel acts directly on the 1-qubit density matrix.
  Mathematically identical to interacting with a fresh environment qubit
  and resetting it, and much cheaper.
* EXPLICIT_ANCILLAS: one real ancilla qubit per interaction, entangled
  via the dilation circuit and never reused. Kept as a cross-check for
  hardware without mid-circuit reset; register size caps it at two
  interactions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import channels, qcore
from .channels import ChannelKind
from .errors import ValidationError

MAX_INTERACTIONS = 5
_MAX_EXPLICIT = 2  # 1 system + 2 ancillas = the 3-qubit register cap


class Backend(enum.Enum):
    KRAUS_RESET = "kraus-reset"
    EXPLICIT_ANCILLAS = "explicit-ancillas"


@dataclass(frozen=True)
class VqcConfig:
    kind: ChannelKind
    n_interactions: int = 2
    backend: Backend = Backend.KRAUS_RESET

    def __post_init__(self):
        if not 1 <= self.n_interactions <= MAX_INTERACTIONS:
            raise ValidationError(
                f"n_interactions must be in [1, {MAX_INTERACTIONS}]")
        if (self.backend is Backend.EXPLICIT_ANCILLAS
                and self.n_interactions > _MAX_EXPLICIT):
            raise ValidationError(
                "explicit-ancilla backend is limited to "
                f"{_MAX_EXPLICIT} interactions (3-qubit register)")


@dataclass
class VqcParams:
    """Trainable parameters: rotation angles, interaction times, readout."""

    phis: np.ndarray
    times: np.ndarray
    w0: float = 0.0
    w1: float = 1.0

    def __post_init__(self):
        self.phis = np.asarray(self.phis, dtype=float)
        self.times = np.asarray(self.times, dtype=float)
        if self.phis.ndim != 1 or self.times.ndim != 1:
            raise ValidationError("phis and times must be 1-d")
        if len(self.phis) != len(self.times) + 1:
            raise ValidationError("need exactly one more angle than interactions")
        if np.any(self.times < 0):
            raise ValidationError("interaction times must be non-negative")
        if not (np.all(np.isfinite(self.phis)) and np.all(np.isfinite(self.times))
                and np.isfinite(self.w0) and np.isfinite(self.w1)):
            raise ValidationError("parameters must be finite")


def forward(cfg: VqcConfig, params: VqcParams, x: float) -> float:
    """<sigma_z> of the system qubit after the interaction sequence."""
    if len(params.times) != cfg.n_interactions:
        raise ValidationError("parameter count does not match configuration")
    if not x > 0:
        raise ValidationError("channel parameter must be positive")
    if cfg.backend is Backend.KRAUS_RESET:
        return _forward_kraus(cfg, params, x)
    return _forward_ancillas(cfg, params, x)


def predict(cfg: VqcConfig, params: VqcParams, x: float) -> float:
    """Linear readout w0 + w1 * <sigma_z>."""
    return params.w0 + params.w1 * forward(cfg, params, x)


def _forward_kraus(cfg: VqcConfig, params: VqcParams, x: float) -> float:
    rho = qcore.density(qcore.ket("0"))
    rho = qcore.apply_unitary(rho, qcore.ry(params.phis[0]))
    for i, t in enumerate(params.times):
        ks = channels.kraus_at(cfg.kind, float(t), x)
        rho = channels.apply_channel(rho, ks, target=0)
        rho = qcore.apply_unitary(rho, qcore.ry(params.phis[i + 1]))
    return qcore.expectation(rho, qcore.PAULI_Z)


def _forward_ancillas(cfg: VqcConfig, params: VqcParams, x: float) -> float:
    n = cfg.n_interactions
    nq = 1 + n
    rho = qcore.density(qcore.ket("0" * nq))
    rho = qcore.apply_unitary(rho, qcore.op_on(qcore.ry(params.phis[0]), 0, nq))
    for i, t in enumerate(params.times):
        anc = 1 + i  # fresh ancilla, still in |0>
        if cfg.kind is ChannelKind.AMPLITUDE_DAMPING:
            theta = channels.theta_a(channels.ad_p(float(t), x))
            cry = qcore.controlled(qcore.ry(theta), control=0, target=anc, n=nq)
            cnot = qcore.controlled(qcore.PAULI_X, control=anc, target=0, n=nq)
            rho = qcore.apply_unitary(qcore.apply_unitary(rho, cry), cnot)
        else:
            theta = channels.theta_p(channels.pd_lambda(float(t), x))
            cry = qcore.controlled(qcore.ry(theta), control=0, target=anc, n=nq)
            rho = qcore.apply_unitary(rho, cry)
        rho = qcore.apply_unitary(rho, qcore.op_on(qcore.ry(params.phis[i + 1]), 0, nq))
    sys_rho = qcore.partial_trace(rho, keep=(0,))
    return qcore.expectation(sys_rho, qcore.PAULI_Z)
