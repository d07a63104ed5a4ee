"""Amplitude-damping and phase-damping qubit channels.

Both channels are parametrized by a single dimensionless number:

* amplitude damping: the coupling ratio ``lam`` (spectral width over
  decay rate, with the decay rate set to 1), excited population decays
  by ``p(t)``;
* phase damping: the correlation-time product ``at``, coherences scale
  by ``coh(t)``.

Each decay function has three algebraic branches. The oscillatory
branch (``lam < 2`` resp. ``at > 1/4``) is where the dynamics develop
memory; the overdamped branch is monotone; the boundary is the
degenerate double-root limit. All three are evaluated in real
arithmetic so no complex residue leaks out and the boundary is the
exact Taylor limit of both sides.
"""

from __future__ import annotations

import enum

import numpy as np

from . import qcore
from .errors import ValidationError


class ChannelKind(enum.Enum):
    AMPLITUDE_DAMPING = "ad"
    PHASE_DAMPING = "pd"


# dataset/CLI working ranges; channel math itself accepts any positive parameter
WORKING_RANGE = {
    ChannelKind.AMPLITUDE_DAMPING: (0.1, 3.0),
    ChannelKind.PHASE_DAMPING: (0.1, 0.75),
}

_DOMAIN_TOL = 1e-9


def _check_time(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValidationError("time must be non-negative")
    return t


def ad_p(t, lam):
    """Excited-state survival probability of the amplitude-damping channel.

    Vectorized over both arguments (NumPy broadcasting); returns a scalar
    for scalar inputs. ``lam`` is the coupling ratio, ``t`` dimensionless.
    """
    t = _check_time(t)
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0):
        raise ValidationError("coupling ratio must be positive")
    t, lam = np.broadcast_arrays(t, lam)
    out = np.empty(t.shape, dtype=float)

    over = lam > 2.0
    under = lam < 2.0
    crit = ~over & ~under

    if np.any(over):
        lm, tt = lam[over], t[over]
        d = np.sqrt(lm * lm - 2.0 * lm)
        # expanded sinh/cosh form: both exponents are <= 0, so no overflow
        g = 0.5 * ((1.0 + lm / d) * np.exp(-0.5 * (lm - d) * tt)
                   + (1.0 - lm / d) * np.exp(-0.5 * (lm + d) * tt))
        out[over] = g * g
    if np.any(under):
        lm, tt = lam[under], t[under]
        d = np.sqrt(2.0 * lm - lm * lm)
        g = np.exp(-0.5 * lm * tt) * (np.cos(0.5 * d * tt)
                                      + (lm / d) * np.sin(0.5 * d * tt))
        out[under] = g * g
    if np.any(crit):
        tt = t[crit]
        g = np.exp(-tt) * (1.0 + tt)
        out[crit] = g * g

    np.clip(out, 0.0, 1.0, out=out)
    return out if out.ndim else float(out)


def pd_lambda(t, at):
    """Coherence multiplier of the phase-damping channel.

    Vectorized like :func:`ad_p`. ``at`` is the correlation-time product;
    the result lies in [-1, 1] and is negative only in the oscillatory
    regime ``at > 1/4``.
    """
    t = _check_time(t)
    at = np.asarray(at, dtype=float)
    if np.any(at <= 0):
        raise ValidationError("correlation-time product must be positive")
    t, at = np.broadcast_arrays(t, at)
    x = t / (2.0 * at)  # time in units of the bath correlation time
    out = np.empty(t.shape, dtype=float)

    osc = at > 0.25
    damp = at < 0.25
    crit = ~osc & ~damp

    if np.any(osc):
        mu = np.sqrt(16.0 * at[osc] ** 2 - 1.0)
        xx = x[osc]
        out[osc] = np.exp(-xx) * (np.cos(mu * xx) + np.sin(mu * xx) / mu)
    if np.any(damp):
        m = np.sqrt(1.0 - 16.0 * at[damp] ** 2)
        xx = x[damp]
        out[damp] = 0.5 * ((1.0 + 1.0 / m) * np.exp(-(1.0 - m) * xx)
                           + (1.0 - 1.0 / m) * np.exp(-(1.0 + m) * xx))
    if np.any(crit):
        xx = x[crit]
        out[crit] = np.exp(-xx) * (1.0 + xx)

    np.clip(out, -1.0, 1.0, out=out)
    return out if out.ndim else float(out)


def _checked_unit(value: float, lo: float, hi: float, what: str) -> float:
    if not lo - _DOMAIN_TOL <= value <= hi + _DOMAIN_TOL:
        raise ValidationError(f"{what}={value!r} outside [{lo}, {hi}]")
    return float(np.clip(value, lo, hi))


def ad_kraus(p: float) -> list[np.ndarray]:
    """Kraus pair of the amplitude-damping channel at survival probability p."""
    p = _checked_unit(p, 0.0, 1.0, "survival probability")
    m0 = np.array([[1.0, 0.0], [0.0, np.sqrt(p)]], dtype=complex)
    m1 = np.array([[0.0, np.sqrt(1.0 - p)], [0.0, 0.0]], dtype=complex)
    return [m0, m1]


def pd_kraus(lam_coh: float) -> list[np.ndarray]:
    """Kraus pair of the phase-damping channel at coherence multiplier lam_coh."""
    lam_coh = _checked_unit(lam_coh, -1.0, 1.0, "coherence multiplier")
    m0 = np.sqrt((1.0 + lam_coh) / 2.0) * qcore.ID2
    m1 = np.sqrt((1.0 - lam_coh) / 2.0) * qcore.PAULI_Z
    return [m0, m1]


def kraus_at(kind: ChannelKind, t: float, x: float) -> list[np.ndarray]:
    """Kraus set of the channel `kind` with parameter x at time t."""
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        return ad_kraus(ad_p(t, x))
    return pd_kraus(pd_lambda(t, x))


def apply_channel(rho: np.ndarray, ks: list[np.ndarray], target: int = 0) -> np.ndarray:
    """Apply a single-qubit Kraus set to `target` of a multi-qubit state."""
    n = int(round(np.log2(rho.shape[0])))
    if not 0 <= target < n:
        raise ValidationError(f"target {target} out of range for {n} qubits")
    assert completeness_defect(ks) < 1e-12, "Kraus set violates completeness"
    out = np.zeros_like(rho, dtype=complex)
    for m in ks:
        me = qcore.op_on(m, target, n)
        out += me @ rho @ me.conj().T
    return out


def completeness_defect(ks: list[np.ndarray]) -> float:
    s = sum(m.conj().T @ m for m in ks)
    return float(np.max(np.abs(s - np.eye(s.shape[0]))))


def theta_a(p: float) -> float:
    """Dilation angle for amplitude damping, in [0, pi]."""
    p = _checked_unit(p, 0.0, 1.0, "survival probability")
    return 2.0 * float(np.arccos(np.sqrt(p)))


def theta_p(lam_coh: float) -> float:
    """Dilation angle for phase damping, in [0, 2*pi]."""
    lam_coh = _checked_unit(lam_coh, -1.0, 1.0, "coherence multiplier")
    return 2.0 * float(np.arccos(lam_coh))


def ad_dilation(rho_sys_anc: np.ndarray, theta: float) -> np.ndarray:
    """Amplitude-damping dilation on a (system, ancilla) pair.

    Controlled-Ry(theta) with the system as control, then CNOT with the
    ancilla as control. Tracing out the ancilla afterwards reproduces the
    Kraus channel with p = cos^2(theta/2). The ancilla must enter in |0>.
    """
    if rho_sys_anc.shape != (4, 4):
        raise ValidationError("dilation expects a 2-qubit density matrix")
    assert _ancilla_in_ground(rho_sys_anc), "ancilla must start in |0>"
    cry = qcore.controlled(qcore.ry(theta), control=0, target=1, n=2)
    cnot = qcore.controlled(qcore.PAULI_X, control=1, target=0, n=2)
    return qcore.apply_unitary(qcore.apply_unitary(rho_sys_anc, cry), cnot)


def pd_dilation(rho_sys_anc: np.ndarray, theta: float) -> np.ndarray:
    """Phase-damping dilation: a single controlled-Ry(theta), system as control."""
    if rho_sys_anc.shape != (4, 4):
        raise ValidationError("dilation expects a 2-qubit density matrix")
    assert _ancilla_in_ground(rho_sys_anc), "ancilla must start in |0>"
    cry = qcore.controlled(qcore.ry(theta), control=0, target=1, n=2)
    return qcore.apply_unitary(rho_sys_anc, cry)


def _ancilla_in_ground(rho: np.ndarray) -> bool:
    anc = qcore.partial_trace(rho, keep=(1,))
    return abs(anc[0, 0] - 1.0) < 1e-9
