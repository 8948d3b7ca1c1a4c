"""Tests for zero-mode trial evaluations and certified field bounds."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from landaucrit.critical_field import hhh_bounds
from landaucrit.trial_bounds import (
    GaussianProfile,
    HermiteBasisProfile,
    PlateauProfile,
    RescaledProfile,
    TabulatedProfile,
    TrialState,
    certify_critical_upper_bound,
    check_sqrt5_inequality,
    evaluate_GB,
    w_scaled_vec,
)

# Frozen 25-digit quadrature references for the kinetic weight
W_SCALED_REF = {
    (1, 0.0): 1.8799712059732503,
    (3, 2.0): 3.418892628050839,
    (2, 31.0): 31.09657383022735,
}


def gaussian_closed_form(nu, B):
    return (2.0 * math.pi) ** -1.5 * math.sqrt(B) * (8.0 * math.pi / (3.0 * nu) - 4.0 * math.pi * nu)


class TestWeights:
    def test_weight_matches_absz_plus_a_for_ell0(self):
        zs = np.array([0.0, 0.5, 2.0, 40.0])
        from landaucrit.potentials import a0_scaled
        assert np.allclose(w_scaled_vec(0, zs), np.abs(zs) + a0_scaled(zs), rtol=1e-14)

    @pytest.mark.parametrize("key", sorted(W_SCALED_REF))
    def test_frozen_references(self, key):
        ell, zeta = key
        got = float(w_scaled_vec(ell, np.array([zeta]))[0])
        assert got == pytest.approx(W_SCALED_REF[key], rel=1e-12)


class TestProfiles:
    def test_gaussian_is_normalized(self):
        p = GaussianProfile(1.7)
        num = quad(lambda z: p.value(z) ** 2, -30.0, 30.0)[0]
        assert num == pytest.approx(1.0, rel=1e-10)
        assert p.norm_sq() == 1.0

    def test_plateau_norm_closed_form(self):
        p = PlateauProfile(2.0, 3.0)
        num = quad(lambda z: p.value(z) ** 2, -5.0, 5.0, points=[-2.0, 2.0])[0]
        assert num == pytest.approx(p.norm_sq(), rel=1e-10)

    def test_plateau_derivative_consistent(self):
        p = PlateauProfile(1.0, 2.0)
        zs = np.linspace(-3.2, 3.2, 41)
        eps = 1e-6
        fd = (p.value(zs + eps) - p.value(zs - eps)) / (2.0 * eps)
        assert np.allclose(p.derivative(zs), fd, atol=1e-8)

    def test_hermite_norm_and_derivative(self):
        coeffs = np.array([0.3, -1.2, 0.0, 0.7])
        p = HermiteBasisProfile(coeffs, scale=1.6)
        num = quad(lambda z: float(p.value(z)[0]) ** 2, -40.0, 40.0, limit=200)[0]
        assert num == pytest.approx(p.norm_sq(), rel=1e-9)
        zs = np.linspace(-5.0, 5.0, 21)
        eps = 1e-6
        fd = (p.value(zs + eps) - p.value(zs - eps)) / (2.0 * eps)
        assert np.allclose(p.derivative(zs), fd, atol=1e-7)

    def test_tabulated_profile(self):
        zs = np.linspace(-4.0, 4.0, 101)
        p = TabulatedProfile(zs, np.exp(-zs**2))
        assert float(p.value(np.array([0.0]))[0]) == pytest.approx(1.0, abs=1e-12)
        assert p.value(np.array([5.0]))[0] == 0.0
        assert p.norm_sq() == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-6)

    def test_rescaled_profile_preserves_norm(self):
        base = PlateauProfile(2.0, 1.0)
        scaled = RescaledProfile(base, 9.0)
        num = quad(lambda z: scaled.value(z) ** 2, -1.5, 1.5,
                   points=[-2.0 / 3.0, 2.0 / 3.0])[0]
        assert num == pytest.approx(base.norm_sq(), rel=1e-10)


class TestEvaluateGB:
    @pytest.mark.parametrize("nu,B", [(0.85, 10.0), (0.9, 100.0), (0.95, 3.0)])
    def test_gaussian_closed_form(self, nu, B):
        trial = TrialState(0, RescaledProfile(GaussianProfile(1.0), B))
        got = evaluate_GB(nu, B, trial).G_B
        assert got == pytest.approx(gaussian_closed_form(nu, B), rel=1e-8)

    def test_zero_crossing_at_special_coupling(self):
        nu0 = math.sqrt(2.0 / 3.0)
        g = evaluate_GB(nu0, 1.0, TrialState(0, GaussianProfile(1.0))).G_B
        assert abs(g) < 1e-8

    def test_scaling_identity(self):
        # G at field B on the rescaled profile equals sqrt(B) times G at B = 1
        for ell, base in [(0, GaussianProfile(1.3)),
                          (0, PlateauProfile(1.5, 1.0)),
                          (2, HermiteBasisProfile(np.array([1.0, 0.4, -0.2])))]:
            g1 = evaluate_GB(0.6, 1.0, TrialState(ell, base)).G_B
            for B in (4.0, 50.0):
                gB = evaluate_GB(0.6, B, TrialState(ell, RescaledProfile(base, B))).G_B
                assert gB == pytest.approx(math.sqrt(B) * g1, rel=1e-8)

    def test_j_identity_and_certification_flag(self):
        trial = TrialState(0, GaussianProfile(1.0))
        for nu, B in [(0.9, 1000.0), (0.3, 2.0)]:
            ev = evaluate_GB(nu, B, trial)
            assert ev.J_at_minus1 == ev.G_B + 2.0 * trial.profile.norm_sq()
            assert ev.certified == (ev.J_at_minus1 <= 0.0)

    def test_plateau_log_field_decay(self):
        # fixed plateau profile: G_B gains a negative, stabilizing slope in log B
        trial = TrialState(0, PlateauProfile(0.1, 0.05))
        logBs = np.log(np.array([1e2, 1e3, 1e4, 1e5, 1e6]))
        vals = np.array([evaluate_GB(0.5, math.exp(lb), trial).G_B / math.exp(lb / 2.0)
                         for lb in logBs])
        slopes = np.diff(vals) / np.diff(logBs)
        assert np.all(slopes < 0.0)
        assert abs(slopes[-1] - slopes[-2]) < abs(slopes[1] - slopes[0])

    def test_input_validation(self):
        with pytest.raises(ValueError):
            evaluate_GB(1.5, 1.0, TrialState(0, GaussianProfile()))
        with pytest.raises(ValueError):
            evaluate_GB(0.5, -1.0, TrialState(0, GaussianProfile()))
        with pytest.raises(ValueError):
            TrialState(-1, GaussianProfile())


class TestCertificates:
    def test_gaussian_family_reproduces_closed_form(self):
        cert = certify_critical_upper_bound(0.9, "gaussian")
        assert cert.certified
        want = 18.0 * math.pi * 0.81 / (3.0 * 0.81 - 2.0) ** 2
        assert math.exp(cert.log_B_cert) == pytest.approx(want, rel=1e-3)

    def test_gaussian_family_below_threshold_has_no_certificate(self):
        cert = certify_critical_upper_bound(0.5, "gaussian")
        assert not cert.certified
        assert cert.log_B_cert is None
        assert cert.m_star > 0.0

    def test_plateau_family_certifies_at_moderate_coupling(self):
        cert = certify_critical_upper_bound(0.5, "plateau")
        assert cert.certified
        assert math.isfinite(cert.log_B_cert)

    def test_certificates_dominate_rigorous_lower_bound(self):
        for nu, family in [(0.9, "gaussian"), (0.5, "plateau"), (0.85, "plateau")]:
            cert = certify_critical_upper_bound(nu, family)
            if cert.certified:
                lower, _ = hhh_bounds(nu)
                assert cert.log_B_cert >= math.log(lower)

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError):
            certify_critical_upper_bound(0.5, "lorentzian")


class TestSqrt5Inequality:
    def test_random_trials_respect_bound(self):
        for nu in (0.3, 0.7):
            worst = check_sqrt5_inequality(nu, samples=40, seed=7)
            assert worst >= -nu * math.sqrt(5.0) - 1e-8

    def test_small_coupling_blows_up_like_inverse_nu(self):
        f = HermiteBasisProfile(np.array([1.0, 0.2, -0.4]))
        trial = TrialState(0, f)
        r_small = evaluate_GB(0.03, 1.0, trial).G_B / f.norm_sq()
        r_large = evaluate_GB(0.3, 1.0, trial).G_B / f.norm_sq()
        assert r_small > 5.0 * max(r_large, 0.0)
        assert r_small > 0.0

    def test_seeded_run_reproducible(self):
        a = check_sqrt5_inequality(0.3, samples=10, seed=42)
        b = check_sqrt5_inequality(0.3, samples=10, seed=42)
        assert a == b

    def test_sample_validation(self):
        with pytest.raises(ValueError):
            check_sqrt5_inequality(0.3, samples=0)
