"""Kernel selection: compiled extension when available, NumPy otherwise.

Set NMPROBE_PURE_PYTHON=1 to force the NumPy implementation regardless
of whether the extension was built.
"""

import os

from . import reference

if os.environ.get("NMPROBE_PURE_PYTHON"):
    _impl = reference
else:
    try:
        from . import _compiled as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = reference

KIND_AD = reference.KIND_AD
KIND_PD = reference.KIND_PD

forward_batch = _impl.forward_batch
epoch_grad = _impl.epoch_grad
softplus = reference.softplus


def backend_name() -> str:
    return _impl.NAME
