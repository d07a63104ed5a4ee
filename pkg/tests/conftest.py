"""Shared oracles and helpers.

Every oracle recomputes its quantity by a route disjoint from the
package internals: decay laws via one unified complex-branch formula in
arbitrary precision (the package uses three real branches in float64),
the memory measure via the closed-form geometric revival sum, and
concurrence via the textbook spectral recipe plus special-case closed
forms. Values frozen inside the tests were produced by these oracles.
"""

from __future__ import annotations

import mpmath as mp
import numpy as np

mp.mp.dps = 40

_YY = np.array([[0, 0, 0, -1],
                [0, 0, 1, 0],
                [0, 1, 0, 0],
                [-1, 0, 0, 0]], dtype=float)


def oracle_ad_decay(t, lam):
    """Excited-population factor p(t).

    p = G^2 with G = e^{-lam t/2} (cosh(d t/2) + (lam/d) sinh(d t/2)) and
    d = sqrt(lam^2 - 2 lam); complex d covers the oscillatory regime, so
    a single expression replaces the package's three branches.
    """
    t, lam = mp.mpf(t), mp.mpf(lam)
    d = mp.sqrt(mp.mpc(lam) ** 2 - 2 * lam)
    if abs(d) < mp.mpf("1e-30"):
        g = mp.exp(-t) * (1 + t)
    else:
        half = d * t / 2
        g = mp.exp(-lam * t / 2) * (mp.cosh(half) + (lam / d) * mp.sinh(half))
    p = mp.re(g) ** 2  # G is real; the imaginary part is roundoff dust
    return float(min(max(p, mp.mpf(0)), mp.mpf(1)))


def oracle_pd_coherence(t, a):
    """Coherence factor via the same unified-complex-branch trick."""
    t, a = mp.mpf(t), mp.mpf(a)
    xi = t / (2 * a)
    c = mp.sqrt(mp.mpc(1) - 16 * a ** 2)
    if abs(c) < mp.mpf("1e-30"):
        val = mp.exp(-xi) * (1 + xi)
    else:
        val = mp.exp(-xi) * (mp.cosh(c * xi) + mp.sinh(c * xi) / c)
    out = mp.re(val)
    return float(min(max(out, mp.mpf(-1)), mp.mpf(1)))


def oracle_nm_ad(lam):
    """Closed-form measure for amplitude damping.

    Entanglement follows |G(t)|, whose successive revival peaks form a
    geometric sequence with ratio q = exp(-pi lam / |d|); the summed
    positive increase is q/(1-q). Zero at and past the regime boundary.
    """
    if lam >= 2.0:
        return 0.0
    lam = mp.mpf(lam)
    d = mp.sqrt(2 * lam - lam ** 2)
    q = mp.exp(-mp.pi * lam / d)
    return float(q / (1 - q))


def oracle_nm_pd(a):
    """Closed-form measure for phase damping, ratio q = exp(-pi/mu)."""
    if a <= 0.25:
        return 0.0
    a = mp.mpf(a)
    mu = mp.sqrt(16 * a ** 2 - 1)
    q = mp.exp(-mp.pi / mu)
    return float(q / (1 - q))


def oracle_concurrence_spectral(rho: np.ndarray) -> float:
    """Spectral recipe: decreasing sqrt-eigenvalues of rho (YY) rho* (YY)."""
    rt = rho @ _YY @ rho.conj() @ _YY
    lam = np.sqrt(np.clip(np.linalg.eigvals(rt).real, 0.0, None))
    lam[::-1].sort()
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def oracle_concurrence_pure(psi: np.ndarray) -> float:
    """For |psi> = (a,b,c,d): C = 2|ad - bc|."""
    return float(2.0 * abs(psi[0] * psi[3] - psi[1] * psi[2]))


def oracle_concurrence_x(rho: np.ndarray) -> float:
    """Closed form for X-shaped density matrices."""
    inner = abs(rho[1, 2]) - np.sqrt(rho[0, 0].real * rho[3, 3].real)
    outer = abs(rho[0, 3]) - np.sqrt(rho[1, 1].real * rho[2, 2].real)
    return float(max(0.0, 2.0 * inner, 2.0 * outer))


def random_density(rng: np.random.Generator, dim: int = 4,
                   rank: int | None = None) -> np.ndarray:
    g = rng.normal(size=(dim, rank or dim)) + 1j * rng.normal(size=(dim, rank or dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)
