"""Qubit noise-channel memory: simulation, quantification, estimation.

The package simulates amplitude- and phase-damping channels whose decay
is driven by a Lorentzian environment, quantifies their memory through
an entanglement-revival measure, and trains a small rotation/interaction
circuit so that a single observable on one qubit estimates that measure.
"""

from .channels import (
    WORKING_RANGE,
    ChannelKind,
    ad_dilation,
    ad_kraus,
    ad_p,
    apply_channel,
    kraus_at,
    pd_dilation,
    pd_kraus,
    pd_lambda,
)
from .errors import ConvergenceError, FormatError, ValidationError
from .files import load_dataset, load_history, load_model, save_dataset, save_history, save_model
from .nonmarkov import EntanglementTrajectory, NmGridConfig, concurrence, nm_measure, trajectory
from .training import (
    EvalResult,
    Hyper,
    LabeledDataset,
    TrainReport,
    evaluate,
    generate_dataset,
    mse,
    split_dataset,
    train,
)
from .vqc import Backend, VqcConfig, VqcParams, forward, predict

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "ChannelKind",
    "ConvergenceError",
    "EntanglementTrajectory",
    "EvalResult",
    "FormatError",
    "Hyper",
    "LabeledDataset",
    "NmGridConfig",
    "TrainReport",
    "ValidationError",
    "VqcConfig",
    "VqcParams",
    "WORKING_RANGE",
    "__version__",
    "ad_dilation",
    "ad_kraus",
    "ad_p",
    "apply_channel",
    "concurrence",
    "evaluate",
    "forward",
    "generate_dataset",
    "kraus_at",
    "load_dataset",
    "load_history",
    "load_model",
    "mse",
    "nm_measure",
    "pd_dilation",
    "pd_kraus",
    "pd_lambda",
    "predict",
    "save_dataset",
    "save_history",
    "save_model",
    "split_dataset",
    "train",
    "trajectory",
]
