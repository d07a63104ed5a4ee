"""NumPy implementation of the training kernels.

Mirrors the compiled extension exactly: same call signatures, same
numerical recipe (decay curves evaluated once per epoch, then reused by
all finite-difference cost evaluations). Selected automatically when the
extension is unavailable or NMPROBE_PURE_PYTHON is set.

Kind codes: 0 = amplitude damping, 1 = phase damping. The circuit state
is tracked as the Bloch pair (bx, bz); by construction only those two
components are ever populated, so the whole forward pass is real.
"""

from __future__ import annotations

import numpy as np

KIND_AD = 0
KIND_PD = 1

NAME = "reference"

MAX_INTERACTIONS = 5  # mirrors the circuit-size contract


def softplus(u):
    return np.logaddexp(0.0, u)


def _decay(kind: int, t: float, xs: np.ndarray) -> np.ndarray:
    """Channel decay at scalar time t for every parameter in xs."""
    xs = np.asarray(xs, dtype=float)
    out = np.empty_like(xs)
    if kind == KIND_AD:
        over = xs > 2.0
        under = xs < 2.0
        crit = ~over & ~under
        if np.any(over):
            lm = xs[over]
            d = np.sqrt(lm * lm - 2.0 * lm)
            g = 0.5 * ((1.0 + lm / d) * np.exp(-0.5 * (lm - d) * t)
                       + (1.0 - lm / d) * np.exp(-0.5 * (lm + d) * t))
            out[over] = g * g
        if np.any(under):
            lm = xs[under]
            d = np.sqrt(2.0 * lm - lm * lm)
            g = np.exp(-0.5 * lm * t) * (np.cos(0.5 * d * t)
                                         + (lm / d) * np.sin(0.5 * d * t))
            out[under] = g * g
        if np.any(crit):
            g = np.exp(-t) * (1.0 + t)
            out[crit] = g * g
        np.clip(out, 0.0, 1.0, out=out)
    else:
        x = t / (2.0 * xs)
        osc = xs > 0.25
        damp = xs < 0.25
        crit = ~osc & ~damp
        if np.any(osc):
            mu = np.sqrt(16.0 * xs[osc] ** 2 - 1.0)
            xx = x[osc]
            out[osc] = np.exp(-xx) * (np.cos(mu * xx) + np.sin(mu * xx) / mu)
        if np.any(damp):
            m = np.sqrt(1.0 - 16.0 * xs[damp] ** 2)
            xx = x[damp]
            out[damp] = 0.5 * ((1.0 + 1.0 / m) * np.exp(-(1.0 - m) * xx)
                               + (1.0 - 1.0 / m) * np.exp(-(1.0 + m) * xx))
        if np.any(crit):
            xx = x[crit]
            out[crit] = np.exp(-xx) * (1.0 + xx)
        np.clip(out, -1.0, 1.0, out=out)
    return out


def _run(kind: int, phis: np.ndarray, decays: np.ndarray) -> np.ndarray:
    """Bloch recursion given per-interaction decay rows; returns <sigma_z>."""
    n_pts = decays.shape[1]
    bx = np.full(n_pts, np.sin(phis[0]))
    bz = np.full(n_pts, np.cos(phis[0]))
    for i in range(decays.shape[0]):
        d = decays[i]
        if kind == KIND_AD:
            bz = d * bz + (1.0 - d)
            bx = np.sqrt(d) * bx
        else:
            bx = d * bx
        c, s = np.cos(phis[i + 1]), np.sin(phis[i + 1])
        bx, bz = c * bx + s * bz, -s * bx + c * bz
    return bz


def forward_batch(kind: int, phis: np.ndarray, times: np.ndarray,
                  xs: np.ndarray) -> np.ndarray:
    """<sigma_z> of the circuit for every channel parameter in xs."""
    if len(times) > MAX_INTERACTIONS:
        raise ValueError("too many interactions for the kernel")
    if len(phis) != len(times) + 1:
        raise ValueError("angle count must be one more than interaction count")
    decays = np.stack([_decay(kind, float(t), xs) for t in times]) \
        if len(times) else np.empty((0, len(xs)))
    return _run(kind, phis, decays)


def epoch_grad(kind: int, phis: np.ndarray, u: np.ndarray, w0: float, w1: float,
               xs: np.ndarray, ys: np.ndarray, h: float):
    """Full-batch cost and gradient for one epoch.

    Readout weights get closed-form gradients (the cost is quadratic in
    them); angles and reparametrized times get central finite differences
    with step h. Returns (cost, grad) with grad laid out as
    [phis..., u..., w0, w1].
    """
    n_int = len(u)
    if n_int > MAX_INTERACTIONS:
        raise ValueError("too many interactions for the kernel")
    if len(phis) != n_int + 1:
        raise ValueError("angle count must be one more than interaction count")
    times = softplus(u)
    d0 = np.stack([_decay(kind, float(t), xs) for t in times]) \
        if n_int else np.empty((0, len(xs)))

    def cost_with(ph, decays):
        z = _run(kind, ph, decays)
        r = w0 + w1 * z - ys
        return float(np.mean(r * r))

    z = _run(kind, phis, d0)
    r = w0 + w1 * z - ys
    c0 = float(np.mean(r * r))

    g = np.zeros(2 * n_int + 3)
    g[-2] = 2.0 * float(np.mean(r))
    g[-1] = 2.0 * float(np.mean(r * z))
    for j in range(n_int + 1):
        ph = phis.copy()
        ph[j] += h
        cp = cost_with(ph, d0)
        ph[j] -= 2.0 * h
        cm = cost_with(ph, d0)
        g[j] = (cp - cm) / (2.0 * h)
    for j in range(n_int):
        up = u.copy()
        up[j] += h
        dp = d0.copy()
        dp[j] = _decay(kind, float(softplus(up[j])), xs)
        cp = cost_with(phis, dp)
        up[j] -= 2.0 * h
        dp[j] = _decay(kind, float(softplus(up[j])), xs)
        cm = cost_with(phis, dp)
        g[n_int + 1 + j] = (cp - cm) / (2.0 * h)
    return c0, g
