"""Decay laws, Kraus families, and dilation circuits."""

import numpy as np
import pytest

from conftest import oracle_ad_decay, oracle_pd_coherence, random_density
from nmprobe import qcore
from nmprobe.channels import (
    ChannelKind,
    ad_dilation,
    ad_kraus,
    ad_p,
    apply_channel,
    completeness_defect,
    kraus_at,
    pd_dilation,
    pd_kraus,
    pd_lambda,
    theta_a,
    theta_p,
)
from nmprobe.errors import ValidationError

AD = ChannelKind.AMPLITUDE_DAMPING
PD = ChannelKind.PHASE_DAMPING


# ---------------------------------------------------------------- decay laws

def test_ad_decay_matches_oracle_across_branches():
    worst = 0.0
    for lam in (0.1, 0.3, 1.0, 1.999, 2.0, 2.001, 2.5, 5.0):
        for t in np.linspace(0.0, 20.0, 81):
            worst = max(worst, abs(ad_p(float(t), lam) - oracle_ad_decay(t, lam)))
    assert worst < 1e-12


def test_pd_coherence_matches_oracle_across_branches():
    worst = 0.0
    for a in (0.1, 0.2499, 0.25, 0.2501, 0.5, 0.75):
        for t in np.linspace(0.0, 20.0, 81):
            worst = max(worst, abs(pd_lambda(float(t), a) - oracle_pd_coherence(t, a)))
    assert worst < 1e-12


def test_ad_decay_frozen_values():
    # oracle_ad_decay(10, 2.5) and (3, 0.6), 40-digit arithmetic
    assert ad_p(10.0, 2.5) == pytest.approx(2.607165046681983e-06, abs=1e-18)
    assert ad_p(3.0, 0.6) == pytest.approx(0.11577199053297414, abs=1e-13)


def test_pd_coherence_frozen_values():
    assert pd_lambda(2.0, 0.6) == pytest.approx(-0.20733337936568264, abs=1e-13)
    assert pd_lambda(5.0, 0.15) == pytest.approx(0.040133242515647254, abs=1e-13)


def test_ad_decay_touches_zero_in_memory_regime():
    # first zero of the oscillatory branch at lam=0.25 solves
    # tan(|d| t / 2) = -|d|/lam; root computed in high precision
    assert ad_p(5.842313123296975, 0.25) < 1e-15


def test_decay_start_at_one():
    assert ad_p(0.0, 0.7) == 1.0
    assert pd_lambda(0.0, 0.4) == 1.0


def test_markovian_ad_decay_is_monotone():
    for lam in (2.0, 2.5, 3.0):
        p = ad_p(np.linspace(0.0, 30.0, 400), lam)
        assert np.all(np.diff(p) <= 1e-15)


def test_markovian_pd_coherence_is_monotone():
    for a in (0.1, 0.2, 0.25):
        lam = pd_lambda(np.linspace(0.0, 30.0, 400), a)
        assert np.all(np.diff(lam) <= 1e-15)


def test_decay_bounds():
    t = np.linspace(0.0, 60.0, 500)
    for lam in (0.1, 0.5, 2.0, 3.0):
        p = ad_p(t, lam)
        assert np.all((p >= 0.0) & (p <= 1.0))
    for a in (0.1, 0.25, 0.5, 0.75):
        v = pd_lambda(t, a)
        assert np.all((v >= -1.0) & (v <= 1.0))


def test_branch_continuity_at_regime_boundaries():
    t = np.linspace(0.0, 20.0, 200)
    gap_ad = np.max(np.abs(ad_p(t, 2.0 - 1e-7) - ad_p(t, 2.0 + 1e-7)))
    gap_pd = np.max(np.abs(pd_lambda(t, 0.25 - 1e-7) - pd_lambda(t, 0.25 + 1e-7)))
    assert gap_ad < 1e-4
    assert gap_pd < 1e-4


def test_decay_broadcasts_and_returns_scalars():
    assert isinstance(ad_p(1.0, 0.5), float)
    out = ad_p(np.linspace(0, 5, 7), 0.5)
    assert out.shape == (7,)
    out = pd_lambda(2.0, np.array([0.1, 0.5]))
    assert out.shape == (2,)


def test_negative_time_rejected():
    with pytest.raises(ValidationError):
        ad_p(-0.1, 0.5)
    with pytest.raises(ValidationError):
        pd_lambda(np.array([1.0, -2.0]), 0.5)


def test_nonpositive_channel_parameter_rejected():
    with pytest.raises(ValidationError):
        ad_p(1.0, 0.0)
    with pytest.raises(ValidationError):
        pd_lambda(1.0, -0.3)


# ---------------------------------------------------------------- Kraus sets

def test_kraus_completeness_across_parameter_sweeps():
    worst = 0.0
    for p in np.linspace(0.0, 1.0, 21):
        worst = max(worst, completeness_defect(ad_kraus(float(p))))
    for lam in np.linspace(-1.0, 1.0, 21):
        worst = max(worst, completeness_defect(pd_kraus(float(lam))))
    assert worst < 1e-12


def test_ad_kraus_action_on_excited_state():
    rho1 = qcore.density(qcore.ket("1"))
    out = apply_channel(rho1, ad_kraus(0.3))
    assert out[1, 1] == pytest.approx(0.3)   # survival probability p
    assert out[0, 0] == pytest.approx(0.7)


def test_pd_kraus_scales_coherence_only():
    plus = qcore.density(qcore.HADAMARD @ np.array([1.0, 0.0]))
    out = apply_channel(plus, pd_kraus(-0.4))
    assert out[0, 0] == pytest.approx(0.5)
    assert out[0, 1] == pytest.approx(-0.2)


def test_kraus_at_composes_decay_and_family():
    t, lam = 1.7, 0.8
    want = apply_channel(qcore.density(qcore.ket("1")), ad_kraus(ad_p(t, lam)))
    got = apply_channel(qcore.density(qcore.ket("1")), kraus_at(AD, t, lam))
    assert np.allclose(got, want, atol=1e-15)
    want = apply_channel(qcore.bell_phi_plus(), pd_kraus(pd_lambda(t, 0.5)), target=0)
    got = apply_channel(qcore.bell_phi_plus(), kraus_at(PD, t, 0.5), target=0)
    assert np.allclose(got, want, atol=1e-15)


def test_tolerated_rounding_overshoot_is_clamped():
    ks = ad_kraus(1.0 + 1e-12)
    assert completeness_defect(ks) < 1e-12
    with pytest.raises(ValidationError):
        ad_kraus(1.1)
    with pytest.raises(ValidationError):
        pd_kraus(-1.0 - 1e-6)


# ---------------------------------------------------------- dilation circuits

def test_dilation_angles():
    assert theta_a(1.0) == pytest.approx(0.0)
    assert theta_a(0.0) == pytest.approx(np.pi)
    assert np.cos(theta_a(0.37) / 2.0) == pytest.approx(np.sqrt(0.37))
    assert theta_p(1.0) == pytest.approx(0.0)
    assert theta_p(-1.0) == pytest.approx(2 * np.pi)
    assert np.cos(theta_p(0.37) / 2.0) == pytest.approx(0.37)


def _with_fresh_ancilla(rho_sys):
    return np.kron(rho_sys, qcore.density(qcore.ket("0")))


def test_ad_dilation_matches_kraus_on_random_states():
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(50):
        rho = random_density(rng, dim=2)
        p = float(rng.uniform(0.0, 1.0))
        via_kraus = apply_channel(rho, ad_kraus(p))
        pair = ad_dilation(_with_fresh_ancilla(rho), theta_a(p))
        via_circuit = qcore.partial_trace(pair, keep=(0,))
        worst = max(worst, float(np.max(np.abs(via_kraus - via_circuit))))
    assert worst < 1e-12


def test_pd_dilation_matches_kraus_on_random_states():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(50):
        rho = random_density(rng, dim=2)
        lam = float(rng.uniform(-1.0, 1.0))
        via_kraus = apply_channel(rho, pd_kraus(lam))
        pair = pd_dilation(_with_fresh_ancilla(rho), theta_p(lam))
        via_circuit = qcore.partial_trace(pair, keep=(0,))
        worst = max(worst, float(np.max(np.abs(via_kraus - via_circuit))))
    assert worst < 1e-12


def test_dilation_trivial_angles():
    rng = np.random.default_rng(12)
    rho = random_density(rng, dim=2)
    out = qcore.partial_trace(ad_dilation(_with_fresh_ancilla(rho), 0.0), keep=(0,))
    assert np.allclose(out, rho, atol=1e-12)  # theta=0: identity channel
    out = qcore.partial_trace(ad_dilation(_with_fresh_ancilla(rho), np.pi), keep=(0,))
    assert np.allclose(out, qcore.density(qcore.ket("0")), atol=1e-12)  # p=0


def test_dilation_rejects_loaded_ancilla():
    rho = qcore.density(qcore.ket("01"))  # ancilla in |1>
    with pytest.raises(AssertionError):
        ad_dilation(rho, 0.5)
