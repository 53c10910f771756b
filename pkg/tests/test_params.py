import math

import pytest
from hypothesis import given, strategies as st

from phaseswitch.params import (NS, LAB_PARAMS, InterferometerConfig,
                                NoCouplingWarning, ParameterError,
                                SystemParams, cooperativity_from_lifetime,
                                derive_rates, load_params,
                                two_pi_ghz, two_pi_mhz, write_config)


def test_unit_helpers():
    assert two_pi_mhz(1.0) == pytest.approx(2 * math.pi)
    assert two_pi_ghz(1.0) == pytest.approx(2 * math.pi * 1e3)


def test_lab_profile_derived_numbers():
    p = LAB_PARAMS
    assert p.k == pytest.approx(20.3 / 25.5)
    # 4 g^2 / (kappa gamma) with g = 545 MHz, kappa = 25.5 GHz, gamma = 6 MHz
    assert p.eta == pytest.approx(4 * 0.545**2 / (25.5 * 0.006))
    assert p.purcell_rate == pytest.approx((1 + p.eta) * p.gamma)


@pytest.mark.parametrize("field,value", [
    ("g", -1.0), ("kappa_wg", 0.0), ("kappa_sc", -1.0), ("gamma", 0.0),
    ("delta_a", float("nan")),
])
def test_invalid_params_rejected(field, value):
    kw = dict(g=1.0, kappa_wg=10.0, kappa_sc=1.0, gamma=0.1)
    kw[field] = value
    with pytest.raises(ParameterError):
        SystemParams(**kw)


def test_zero_coupling_allowed():
    p = SystemParams(g=0.0, kappa_wg=10.0, kappa_sc=1.0, gamma=0.1)
    assert p.eta == 0.0


@given(eta=st.floats(0.0, 50.0), k=st.floats(0.05, 1.0),
       kappa=st.floats(1.0, 1e6), gamma=st.floats(1e-3, 1e2))
def test_from_cooperativity_round_trip(eta, k, kappa, gamma):
    p = SystemParams.from_cooperativity(eta, k, kappa, gamma)
    assert p.eta == pytest.approx(eta, rel=1e-12, abs=1e-12)
    assert p.k == pytest.approx(k, rel=1e-12)
    assert p.kappa == pytest.approx(kappa, rel=1e-12)


def test_derived_rates_resonant():
    p = LAB_PARAMS
    r = derive_rates(p)
    assert r.kappa_tilde == pytest.approx(p.kappa / 2)
    assert r.gamma_tilde == pytest.approx(p.gamma / 2)
    assert r.eta_tilde == pytest.approx(p.eta)


def test_with_delta_sign_convention():
    p = LAB_PARAMS.with_delta(2.0)
    assert p.delta_a == -2.0
    assert p.delta == 2.0


def test_cooperativity_from_lifetime():
    gamma = 1.0 / (26.0 * NS)
    assert cooperativity_from_lifetime(3.0 * NS, gamma) == pytest.approx(
        26.0 / 3.0 - 1.0)


def test_lifetime_without_enhancement_warns():
    gamma = 1.0 / (26.0 * NS)
    with pytest.warns(NoCouplingWarning):
        eta = cooperativity_from_lifetime(30.0 * NS, gamma)
    assert eta < 0


def test_lifetime_rejects_nonpositive():
    with pytest.raises(ParameterError):
        cooperativity_from_lifetime(0.0, 1.0)


def test_dark_port_angle():
    cfg = InterferometerConfig.dark_port(0.8)
    assert math.tan(cfg.theta) == pytest.approx(0.6)
    assert cfg.theta_prime == pytest.approx(math.pi / 4)
    with pytest.raises(ParameterError):
        InterferometerConfig.dark_port(0.0)


def test_config_round_trip(tmp_path):
    path = tmp_path / "p.cfg"
    p = LAB_PARAMS.replace(delta_a=two_pi_mhz(3.0))
    write_config(p, path)
    q = load_params(path)
    for a, b in zip(p.to_config().values(), q.to_config().values()):
        assert a == pytest.approx(b, rel=1e-14, abs=1e-14)


def test_config_partial_falls_back_to_defaults(tmp_path):
    path = tmp_path / "p.cfg"
    path.write_text("# comment\ngamma_2pi_MHz = 5.0  # trailing\n")
    p = load_params(path)
    assert p.gamma == pytest.approx(two_pi_mhz(5.0))
    assert p.g == LAB_PARAMS.g


@pytest.mark.parametrize("body", ["bogus = 1\n", "g_2pi_MHz 3\n",
                                  "g_2pi_MHz = abc\n"])
def test_config_errors(tmp_path, body):
    path = tmp_path / "p.cfg"
    path.write_text(body)
    with pytest.raises(ParameterError):
        load_params(path)
