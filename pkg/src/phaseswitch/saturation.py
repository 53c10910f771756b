"""Saturated steady state with the cavity adiabatically eliminated.

In the bad-cavity limit the atom obeys driven Bloch equations with a
Purcell-enhanced decay.  These are linear in ``(<sigma>, <sigma>*,
<sigma_z>)`` so the steady state is found by a direct 3x3 solve for any
detuning; the resonant closed forms are provided alongside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import InterferometerConfig, SystemParams, derive_rates


@dataclass(frozen=True)
class DriveField:
    """Incident photon flux ``|b_s|^2`` (photons/us) and the dimensionless
    resonant drive amplitude ``Y``."""

    photon_flux: float
    Y: float

    @classmethod
    def from_flux(cls, p: SystemParams, cfg: InterferometerConfig,
                  flux: float) -> "DriveField":
        if flux < 0:
            raise ValueError("photon flux must be non-negative")
        y2 = 4.0 * p.eta / p.gamma * p.k * flux * math.cos(cfg.theta)**2
        return cls(flux, math.sqrt(y2))

    @classmethod
    def from_Y(cls, p: SystemParams, cfg: InterferometerConfig,
               Y: float) -> "DriveField":
        if Y < 0:
            raise ValueError("Y must be non-negative")
        flux = Y**2 * p.gamma / (4.0 * p.eta * p.k * math.cos(cfg.theta)**2)
        return cls(flux, Y)

    def waveguide_amplitude(self, cfg: InterferometerConfig) -> float:
        """Coherent amplitude entering the cavity, ``b_s cos(theta)``."""
        return math.sqrt(self.photon_flux) * math.cos(cfg.theta)


def waveguide_amplitude_from_Y(p: SystemParams, Y: float) -> float:
    """``<a_wg,in>`` giving drive ``Y = 4 g sqrt(kappa_wg) <a_in>/(kappa gamma)``."""
    if p.g == 0:
        raise ValueError("Y is undefined without atom-cavity coupling")
    return Y * p.kappa * p.gamma / (4.0 * p.g * math.sqrt(p.kappa_wg))


@dataclass(frozen=True)
class BlochSteadyState:
    """Steady coherence and excited-state population.

    The population is stored rather than ``<sigma_z>`` so that it keeps full
    relative precision at weak drive.
    """

    sigma: complex
    excited_population: float

    @property
    def sigma_z(self) -> float:
        return 2.0 * self.excited_population - 1.0


def bloch_closed_form(eta: float, Y: float) -> BlochSteadyState:
    """Resonant steady state for drive ``Y`` and cooperativity ``eta``."""
    s = 1.0 + eta
    den = 2.0 * Y**2 + s**2
    return BlochSteadyState(sigma=1j * Y * s / den, excited_population=Y**2 / den)


def bloch_steady_state_amplitude(p: SystemParams,
                                 a_in: complex) -> BlochSteadyState:
    """Steady state of the adiabatic Bloch equations for a coherent
    waveguide amplitude ``a_in`` at arbitrary detunings."""
    rates = derive_rates(p)
    kt, gt = rates.kappa_tilde, rates.gamma_tilde
    g = p.g
    s = math.sqrt(p.kappa_wg) * a_in
    decay = gt + g**2 / kt
    drive = 1j * g * s / kt
    pop_decay = p.gamma + g**2 * p.kappa / abs(kt)**2
    feed = 2j * g * s / kt
    # unknowns (sigma, sigma*, P_e) with sigma_z = 2 P_e - 1
    m = np.array([
        [-decay, 0.0, -2.0 * drive],
        [0.0, -np.conj(decay), -2.0 * np.conj(drive)],
        [np.conj(feed), feed, -2.0 * pop_decay],
    ], dtype=complex)
    rhs = np.array([-drive, -np.conj(drive), 0.0], dtype=complex)
    sigma, _, pop = np.linalg.solve(m, rhs)
    return BlochSteadyState(complex(sigma), float(pop.real))


def bloch_steady_state(p: SystemParams, Y: float) -> BlochSteadyState:
    """Steady ``(<sigma>, <sigma_z>)`` for dimensionless drive ``Y``.

    On resonance this is the closed form; otherwise the adiabatic Bloch
    equations are solved at the same incident amplitude.
    """
    if p.delta_a == 0 and p.delta_c == 0:
        return bloch_closed_form(p.eta, Y)
    return bloch_steady_state_amplitude(p, waveguide_amplitude_from_Y(p, Y))


def _port_coefficients(cfg: InterferometerConfig, kappa_wg: float):
    """(c-number factor per unit b_s, cavity-field weight) for both ports."""
    ct, st = math.cos(cfg.theta), math.sin(cfg.theta)
    cp, sp = math.cos(cfg.theta_prime), math.sin(cfg.theta_prime)
    ev = np.exp(1j * cfg.phi_v)
    root = math.sqrt(kappa_wg)
    return ((cp * ct + sp * ev * st, root * cp),
            (-sp * ct + cp * ev * st, -root * sp))


def adiabatic_moments(p: SystemParams, a_in: complex):
    """``(<sigma>, <sigma^dag sigma>, <a>, <a^dag a>)`` in the adiabatic
    model, keeping the quantum (non-factorized) atomic population."""
    bloch = bloch_steady_state_amplitude(p, a_in)
    kt = derive_rates(p).kappa_tilde
    s = math.sqrt(p.kappa_wg) * a_in
    sig = bloch.sigma
    pop = bloch.excited_population
    a = -(1j * p.g * sig + s) / kt
    ada = (p.g**2 * pop - 1j * p.g * s * np.conj(sig)
           + 1j * p.g * np.conj(s) * sig + abs(s)**2).real / abs(kt)**2
    return sig, pop, a, ada


def port_intensities_amplitude(p: SystemParams, b_s: complex,
                               cfg: InterferometerConfig):
    """Photon fluxes ``<d_i^dag d_i>`` at both ports for input ``b_s``."""
    a_in = b_s * math.cos(cfg.theta)
    _, _, a, ada = adiabatic_moments(p, a_in)
    out = []
    for factor, w in _port_coefficients(cfg, p.kappa_wg):
        c = factor * b_s
        out.append(float(abs(c)**2 + 2.0 * (np.conj(c) * w * a).real
                         + w**2 * ada))
    return tuple(out)


def port_intensities(p: SystemParams, Y: float,
                     cfg: InterferometerConfig | None = None):
    """Saturated port fluxes ``(I1, I2)`` in photons/us for drive ``Y``.

    ``cfg`` defaults to the dark-port setting for ``p.k``.
    """
    cfg = cfg or InterferometerConfig.dark_port(p.k)
    drive = DriveField.from_Y(p, cfg, Y)
    return port_intensities_amplitude(p, math.sqrt(drive.photon_flux), cfg)


def port_intensities_closed_form(p: SystemParams, Y: float):
    """Resonant dark-port fluxes in closed form."""
    eta, k = p.eta, p.k
    pre = p.gamma / (2.0 * eta) * k * Y**2
    den = 2.0 * Y**2 + (1.0 + eta)**2
    i1 = pre * eta**2 / den
    i2 = pre * ((2 * Y**2 + 1) * (1 - 2 * k)**2
                + 2 * (1 - k) * (1 - 2 * k) * eta
                + (1 - k)**2 * eta**2) / (k**2 * den)
    return i1, i2


def loss_budget(p: SystemParams, Y: float,
                cfg: InterferometerConfig | None = None) -> dict:
    """Where the incident photons go: both ports, cavity loss, atom."""
    cfg = cfg or InterferometerConfig.dark_port(p.k)
    drive = DriveField.from_Y(p, cfg, Y)
    b_s = math.sqrt(drive.photon_flux)
    i1, i2 = port_intensities_amplitude(p, b_s, cfg)
    _, pop, _, ada = adiabatic_moments(p, b_s * math.cos(cfg.theta))
    return {"input": drive.photon_flux, "port1": i1, "port2": i2,
            "cavity_loss": p.kappa_sc * ada, "atomic_emission": p.gamma * pop}
