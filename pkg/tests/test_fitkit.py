import math

import numpy as np
import pytest

from phaseswitch.fitkit import (FitResult, central_jacobian, fit_exponential,
                                fit_sinusoid, fit_spectrum)
from phaseswitch.linres import reference_phase_fringe, spectrum_signals
from phaseswitch.params import NS, SystemParams, two_pi_ghz

from .conftest import GAMMA, KAPPA

TRUTH = (33.0, 20.3, 5.2, 0.4, 1.0)


def spectrum_data(truth=TRUTH, n=801, noise=0.0, seed=0):
    nu = np.linspace(-2 * truth[0], 2 * truth[0], n)
    s, d = spectrum_signals(truth[0], two_pi_ghz(truth[1]),
                            two_pi_ghz(truth[2]), truth[4], truth[3], nu)
    if noise:
        rng = np.random.default_rng(seed)
        scale = np.max(s)
        s = s + noise * scale * rng.standard_normal(n)
        d = d + noise * scale * rng.standard_normal(n)
    return nu, s, d


def poisson_decay(rng, tau=3.0 * NS, total=1e4, background=0.2):
    # bins wide enough that the sqrt(max(y, 1)) weights stay unbiased
    t = np.arange(0.0, 15.0, 0.25) * NS
    shape = np.exp(-t / tau)
    mean = total * shape / shape.sum() + background
    return t, rng.poisson(mean).astype(float)


def test_central_jacobian_exact_for_quadratic():
    jac = central_jacobian(lambda x: np.array([x[0]**2, x[0] * x[1]]),
                           np.array([2.0, 3.0]))
    assert np.allclose(jac, [[4.0, 0.0], [3.0, 2.0]], atol=1e-8)


def test_exponential_noiseless_recovery():
    t = np.linspace(0, 30, 301) * NS
    fit = fit_exponential(t, 5.0 * np.exp(-t / (3 * NS)), 0.0, sigmas=np.ones(301))
    assert fit.converged
    assert fit["tau"] / NS == pytest.approx(3.0, rel=1e-8)
    assert fit["A"] == pytest.approx(5.0, rel=1e-8)


def test_exponential_window_reports_amplitude_at_origin():
    t = np.linspace(0, 30, 301) * NS
    y = 40.0 * np.exp(-t / (3 * NS)) + 2.0
    fit = fit_exponential(t, y, 4.0 * NS, sigmas=np.ones(301))
    assert fit["A"] == pytest.approx(40.0, rel=1e-8)
    assert fit["B"] == pytest.approx(2.0, rel=1e-8)


def test_exponential_needs_points():
    with pytest.raises(ValueError):
        fit_exponential([0, 1, 2, 3], [4, 3, 2, 1], 1.5)


def test_exponential_poisson_three_sigma_coverage():
    rng = np.random.default_rng(2024)
    hits = 0
    for _ in range(100):
        t, y = poisson_decay(rng)
        fit = fit_exponential(t, y, 0.0)
        hits += abs(fit["tau"] - 3 * NS) < 3 * fit.error("tau")
    assert hits >= 95


def test_exponential_error_calibration():
    # 1 sigma should cover about 68 %, 2 sigma at least 90 %
    rng = np.random.default_rng(11)
    z = []
    for _ in range(200):
        t, y = poisson_decay(rng)
        fit = fit_exponential(t, y, 0.0)
        z.append((fit["tau"] - 3 * NS) / fit.error("tau"))
    z = np.abs(np.array(z))
    assert 0.6 <= np.mean(z < 1) <= 0.76
    assert np.mean(z < 2) >= 0.9


def test_lifetime_to_cooperativity_chain():
    from phaseswitch.params import cooperativity_from_lifetime
    t = np.linspace(0, 30, 301) * NS
    fit = fit_exponential(t, 5.0 * np.exp(-t / (3 * NS)), 0.0,
                          sigmas=np.ones(301))
    eta = cooperativity_from_lifetime(fit["tau"], 1.0 / (26 * NS))
    assert eta == pytest.approx(7.67, abs=0.005)


def test_sinusoid_exact_recovery():
    x = np.linspace(0, 2 * math.pi, 40, endpoint=False)
    fit = fit_sinusoid(x, 2.0 + 0.7 * np.cos(x - 1.3))
    assert fit.params == pytest.approx([2.0, 0.7, 1.3], abs=1e-10)
    assert fit.extra["visibility"] == pytest.approx(0.35)


def test_sinusoid_negative_amplitude_normalized():
    x = np.linspace(0, 2 * math.pi, 40, endpoint=False)
    fit = fit_sinusoid(x, 1.0 - 0.5 * np.cos(x))
    assert fit["V"] > 0
    assert abs(fit["phi"]) == pytest.approx(math.pi, abs=1e-10)


def test_sinusoid_degenerate_flagged():
    x = np.linspace(0, 2 * math.pi, 20, endpoint=False)
    fit = fit_sinusoid(x, np.full(20, 3.0))
    assert "phase_undefined" in fit.flags
    assert not fit.converged
    assert math.isnan(fit["phi"])


def test_sinusoid_requires_full_period():
    with pytest.raises(ValueError):
        fit_sinusoid(np.linspace(0, 2, 10), np.ones(10))


def test_model_fringes_phase_difference():
    p = SystemParams.from_cooperativity(7.7, 0.796, KAPPA, GAMMA)
    phis = np.linspace(0, 2 * math.pi, 73)
    with_atom = fit_sinusoid(phis, reference_phase_fringe(p, phis, True).y)
    without = fit_sinusoid(phis, reference_phase_fringe(p, phis, False).y)
    diff = abs((with_atom["phi"] - without["phi"]) % (2 * math.pi))
    assert diff / math.pi == pytest.approx(1.0, abs=0.02)


def test_dark_port_reference_fringe_has_full_visibility():
    p = SystemParams.from_cooperativity(7.7, 0.796, KAPPA, GAMMA)
    phis = np.linspace(0, 2 * math.pi, 73)
    theta = math.atan(2 * p.k - 1)
    tr = reference_phase_fringe(p, phis, False, theta=theta)
    assert fit_sinusoid(phis, tr.y).extra["visibility"] == pytest.approx(
        1.0, abs=1e-10)


def test_spectrum_noiseless_recovery():
    nu, s, d = spectrum_data()
    fit = fit_spectrum(nu, s, d)
    assert fit.converged and not fit.flags
    assert fit.params == pytest.approx(list(TRUTH), rel=1e-6)
    assert fit.extra["k"] == pytest.approx(20.3 / 25.5, rel=1e-6)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_spectrum_noisy_k(seed):
    nu, s, d = spectrum_data(noise=0.01, seed=seed)
    fit = fit_spectrum(nu, s, d, seed=seed)
    assert fit.extra["k"] == pytest.approx(0.80, abs=0.02)
    assert "ambiguous" not in fit.flags


def test_spectrum_without_loss_flagged_flat():
    nu, s, d = spectrum_data(truth=(33.0, 20.3, 0.0, 0.4, 1.0))
    fit = fit_spectrum(nu, s, d)
    assert "flat_sum" in fit.flags


def test_spectrum_fixed_parameter():
    nu, s, d = spectrum_data()
    fit = fit_spectrum(nu, s, d, fixed={"nu_fsr": 33.0})
    assert fit.names == ("kappa_wg", "kappa_sc", "phase", "amplitude")
    assert fit["kappa_wg"] == pytest.approx(20.3, rel=1e-6)


def test_fit_result_serialization():
    r = FitResult(np.array([1.0, 2.0]), np.eye(2) * 0.04, 0.5, True, 3,
                  ("a", "b"))
    d = r.as_dict()
    assert d["errors"] == {"a": 0.2, "b": 0.2}
    assert r["b"] == 2.0
