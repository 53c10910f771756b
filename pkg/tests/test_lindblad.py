import math

import numpy as np
import pytest

from phaseswitch.lindblad import (MAX_FOCK, ConvergenceError, DarkPortWarning,
                                  DrivenSystem, HilbertConfig, Propagator,
                                  QuantumState, TruncationWarning,
                                  build_liouvillian, g2, hamiltonian,
                                  operators, sigma_z, steady_state, unvec, vec)
from phaseswitch.params import (InterferometerConfig, SystemParams,
                                derive_rates)
from phaseswitch.saturation import (adiabatic_moments, bloch_closed_form,
                                    waveguide_amplitude_from_Y)

G = 1.0
BAD_CAVITY = SystemParams(g=G, kappa_wg=80 * G, kappa_sc=20 * G,
                          gamma=G / 10)


def test_hilbert_config_bounds():
    assert HilbertConfig(3).dim == 8
    with pytest.raises(ValueError):
        HilbertConfig(1)
    with pytest.raises(ValueError):
        HilbertConfig(MAX_FOCK + 1)


def test_operator_algebra():
    h = HilbertConfig(5)
    a, s = operators(h)
    comm = a @ a.conj().T - a.conj().T @ a
    # [a, a^dag] = 1 except at the truncation edge
    assert np.allclose(np.diag(comm)[:5], 1.0)
    assert np.allclose(s @ s, 0)
    assert np.allclose(sigma_z(h) @ sigma_z(h), np.eye(h.dim))


def test_vec_round_trip():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    assert np.array_equal(unvec(vec(x), 6), x)


def test_liouvillian_is_trace_preserving():
    h = HilbertConfig(4)
    L = build_liouvillian(BAD_CAVITY.with_delta(0.3), 0.7, h)
    tr = vec(np.eye(h.dim))
    assert np.max(np.abs(tr @ L)) < 1e-12


def test_hamiltonian_is_hermitian():
    h = HilbertConfig(4)
    H = hamiltonian(BAD_CAVITY.replace(delta_c=2.0, delta_a=-1.0), 0.5 + 0.2j,
                    h)
    assert np.allclose(H, H.conj().T)


def test_steady_state_is_physical():
    h = HilbertConfig(6)
    L = build_liouvillian(BAD_CAVITY, 1.0, h)
    state = steady_state(L, h.n_max)
    state.check()
    assert np.linalg.norm(L @ vec(state.rho)) < 1e-10 * np.linalg.norm(L)


def test_empty_cavity_is_coherent_state():
    p = BAD_CAVITY.replace(g=0.0, delta_c=7.0)
    a_in = 0.3
    system = DrivenSystem(p, a_in / math.cos(math.pi / 4), HilbertConfig(6),
                          InterferometerConfig())
    alpha = -math.sqrt(p.kappa_wg) * a_in / derive_rates(p).kappa_tilde
    assert system.cavity_field() == pytest.approx(alpha, abs=1e-10)
    n = system.expect(operators(system.h)[0].conj().T
                      @ operators(system.h)[0]).real
    assert n == pytest.approx(abs(alpha)**2, rel=1e-8)
    assert system.sigma_z() == pytest.approx(-1.0)


def test_output_field_reproduces_reflection():
    a_in = 1e-3
    p = BAD_CAVITY.with_delta(0.05)
    system = DrivenSystem(p, a_in / math.cos(math.pi / 4), HilbertConfig(3),
                          InterferometerConfig())
    from phaseswitch.linres import scattering_amplitudes
    r_c = scattering_amplitudes(p).r_c
    assert system.output_field() / a_in == pytest.approx(r_c, rel=1e-3)


@pytest.mark.parametrize("Y", [0.3, 1.0, 3.0])
def test_matches_adiabatic_closed_form(Y):
    p = SystemParams(g=G, kappa_wg=100 * G, kappa_sc=0.0, gamma=G / 10)
    system = DrivenSystem.from_Y(p, Y, HilbertConfig(10))
    ref = bloch_closed_form(p.eta, Y).sigma_z
    assert system.sigma_z() == pytest.approx(ref, rel=0.01)


def test_matches_adiabatic_off_resonance():
    p = SystemParams(g=G, kappa_wg=100 * G, kappa_sc=0.0, gamma=G / 10,
                     delta_a=0.1, delta_c=3.0)
    a_in = waveguide_amplitude_from_Y(p, 0.5)
    system = DrivenSystem(p, a_in / math.cos(math.pi / 4), HilbertConfig(8),
                          InterferometerConfig())
    sig, pop, _, _ = adiabatic_moments(p, a_in)
    assert system.sigma() == pytest.approx(sig, rel=0.02)
    assert 0.5 * (1 + system.sigma_z()) == pytest.approx(pop, rel=0.02)


def test_truncation_warning():
    p = BAD_CAVITY.replace(g=0.0)
    with pytest.warns(TruncationWarning):
        DrivenSystem(p, 10.0, HilbertConfig(2), InterferometerConfig())


def test_degenerate_null_space_raises():
    L = np.zeros((16, 16), dtype=complex)
    with pytest.raises(ConvergenceError):
        steady_state(L)


def test_propagator_relaxes_to_steady_state():
    h = HilbertConfig(4)
    L = build_liouvillian(BAD_CAVITY, 0.5, h)
    rho0 = np.zeros((h.dim, h.dim), complex)
    rho0[0, 0] = 1.0
    prop = Propagator(L)
    final = prop.evolve(rho0, np.linspace(0, 200.0, 11))[-1]
    ss = steady_state(L, h.n_max).rho
    assert np.max(np.abs(final - ss)) < 1e-8
    assert len(prop._cache) == 1
    with pytest.raises(ValueError):
        prop.evolve(rho0, [1.0, 0.5])


def test_quantum_state_checks():
    rho = np.zeros((4, 4), complex)
    rho[0, 0] = 1.0
    st = QuantumState(rho, 1)
    st.check()
    assert st.top_population == 0.0
    with pytest.raises(ValueError):
        QuantumState(2 * rho, 1).check()


def test_g2_without_coupling_is_flat():
    p = BAD_CAVITY.replace(g=0.0)
    taus = np.linspace(0, 5, 11)
    tr = g2(p, 0.5, HilbertConfig(5), "D", taus)
    assert np.max(np.abs(tr.y - 1)) < 1e-8


def test_g2_dark_port_warns():
    p = BAD_CAVITY.replace(g=0.0, kappa_sc=0.0)
    cfg = InterferometerConfig.dark_port(p.k)
    with pytest.warns(DarkPortWarning):
        DrivenSystem(p, 0.3, HilbertConfig(6), cfg).port_statistics("A", [0])


def test_g2_antibunching_bad_cavity_reflection():
    # theta = 0 sends all light to the cavity; port A sees the reflection
    p = SystemParams(g=G, kappa_wg=20 * G, kappa_sc=0.0, gamma=G / 10)
    cfg = InterferometerConfig(theta=0.0, theta_prime=0.0)
    a_in = waveguide_amplitude_from_Y(p, 0.05)
    tr = g2(p, a_in, HilbertConfig(4), "A", [0.0, 200.0], cfg)
    assert tr.y[1] == pytest.approx(1.0, abs=1e-3)
