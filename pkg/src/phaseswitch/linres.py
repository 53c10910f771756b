"""Weak-drive (linear) response of the atom-cavity system and interferometer.

The cavity is single sided: it couples to the waveguide at rate
``kappa_wg`` and to unobserved loss channels at ``kappa_sc``.  The
interferometer splits the input into an H arm containing the cavity and a
lossless V reference arm with phase ``phi_v``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .params import (InterferometerConfig, SingularityError, SystemParams,
                     derive_rates, finite_array, two_pi_ghz)
from .traces import TraceSeries

PHASE_FLAG_AMPLITUDE = 1e-6


class SparseSweepWarning(UserWarning):
    """A sweep is too coarse for unambiguous phase unwrapping."""


def reflection_lossless(eta, delta, gamma):
    """Reflection coefficient of a lossless one-sided cavity with an atom.

    Vectorizes over ``eta`` and ``delta`` (laser-atom detuning).  Returns -1
    for an empty cavity and 0 at critical coupling ``eta = 1``.
    """
    if not np.all(np.asarray(gamma) > 0):
        raise ValueError("gamma must be positive")
    eta = np.asarray(eta, dtype=float)
    delta = np.asarray(delta, dtype=float)
    out = (((eta - 1) * gamma + 2j * delta)
           / ((eta + 1) * gamma - 2j * delta))
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """Amplitudes into the waveguide (r), cavity-loss (t) and free-space (l)
    modes for the uncoupled (u) and coupled (c) atomic states."""

    r_u: complex
    r_c: complex
    t_u: complex
    t_c: complex
    l_u: complex
    l_c: complex

    def branch(self, state: str) -> tuple[complex, complex, complex]:
        if state == "u":
            return (self.r_u, self.t_u, self.l_u)
        if state == "c":
            return (self.r_c, self.t_c, self.l_c)
        raise ValueError(f"unknown atomic state {state!r}")

    def norms(self) -> tuple[float, float]:
        return (abs(self.r_u)**2 + abs(self.t_u)**2 + abs(self.l_u)**2,
                abs(self.r_c)**2 + abs(self.t_c)**2 + abs(self.l_c)**2)


def scattering_amplitudes(p: SystemParams) -> ScatteringAmplitudes:
    rates = derive_rates(p)
    kt, gt, et = rates.kappa_tilde, rates.gamma_tilde, rates.eta_tilde
    pole = 1.0 + et
    if abs(pole) < 1e-14:
        raise SingularityError("1 + eta_tilde vanishes")
    t_u = -math.sqrt(p.kappa_sc * p.kappa_wg) / kt
    return ScatteringAmplitudes(
        r_u=1.0 - p.kappa_wg / kt,
        r_c=1.0 - p.kappa_wg / (kt * pole),
        t_u=t_u,
        t_c=t_u / pole,
        l_u=0j,
        l_c=1j * p.g * math.sqrt(p.gamma * p.kappa_wg) / (gt * kt * pole),
    )


def cavity_reflection(p: SystemParams, atom_present: bool = True) -> complex:
    amps = scattering_amplitudes(p)
    return amps.r_c if atom_present else amps.r_u


@dataclass(frozen=True)
class PortFields:
    d1: complex
    d2: complex

    @property
    def power(self) -> float:
        return abs(self.d1)**2 + abs(self.d2)**2

    @property
    def fraction_1(self) -> float:
        return abs(self.d1)**2 / self.power


def port_fields(p: SystemParams, cfg: InterferometerConfig,
                atom_present: bool = True, b_s: complex = 1.0) -> PortFields:
    """Fields at the two detectors for input amplitude ``b_s``.

    Built from the two arms directly: the H component is reflected by the
    cavity, the V component by the reference mirror with phase ``phi_v``,
    and both are projected on the detection basis rotated by
    ``theta_prime``.
    """
    r = cavity_reflection(p, atom_present)
    b_h = b_s * math.cos(cfg.theta)
    b_v = b_s * math.sin(cfg.theta)
    out_h = r * b_h
    out_v = np.exp(1j * cfg.phi_v) * b_v
    cp, sp = math.cos(cfg.theta_prime), math.sin(cfg.theta_prime)
    return PortFields(d1=complex(cp * out_h + sp * out_v),
                      d2=complex(-sp * out_h + cp * out_v))


def port_fields_closed_form(p: SystemParams, phi_v: float = 0.0,
                            atom_present: bool = True,
                            b_s: complex = 1.0) -> PortFields:
    """Port fields for the dark-port setting ``tan(theta) = 2k - 1`` and
    ``theta_prime = pi/4`` in closed form."""
    rates = derive_rates(p)
    k = p.k
    pole = 1.0 + (rates.eta_tilde if atom_present else 0.0)
    ratio = p.kappa_wg / rates.kappa_tilde
    pre = b_s / (2.0 * math.sqrt(1.0 + 2.0 * k * (k - 1.0)))
    ev = np.exp(1j * phi_v)
    d1 = pre * ((ev * (2 * k - 1) + 1) * pole - ratio) / pole
    d2 = pre * ((ev * (2 * k - 1) - 1) * pole + ratio) / pole
    return PortFields(complex(d1), complex(d2))


def interferometer_numbers(p: SystemParams, phi_v: float = 0.0) -> dict:
    """Dark-port reflectances with and without the atom.

    Returns total reflected power with/without atom, their ratio, the port-1
    fraction with the atom, and the bare-cavity reflectance ``|r_u|^2``.
    """
    cfg = InterferometerConfig.dark_port(p.k, phi_v)
    with_atom = port_fields(p, cfg, atom_present=True)
    without = port_fields(p, cfg, atom_present=False)
    return {
        "power_with_atom": with_atom.power,
        "power_without_atom": without.power,
        "power_ratio": with_atom.power / without.power,
        "port1_fraction": with_atom.fraction_1,
        "cavity_reflectance_empty": abs(cavity_reflection(p, False))**2,
    }


def phase_spectrum(p: SystemParams, deltas) -> TraceSeries:
    """Atom-induced reflection phase ``arg r_c - arg r_u`` versus the
    laser-atom detuning, unwrapped along the sweep.

    The cavity detuning stays at ``p.delta_c``.  Points where ``|r_c|`` is
    below :data:`PHASE_FLAG_AMPLITUDE` are flagged.
    """
    deltas = finite_array(deltas, "deltas")
    if deltas.size > 1 and np.any(np.diff(deltas) < 0):
        raise ValueError("deltas must be sorted ascending")
    r_c = np.empty(deltas.size, complex)
    r_u = np.empty(deltas.size, complex)
    for i, d in enumerate(deltas):
        amps = scattering_amplitudes(p.with_delta(d))
        r_c[i], r_u[i] = amps.r_c, amps.r_u
    raw = np.angle(r_c) - np.angle(r_u)
    phase = np.unwrap(raw)
    if phase.size > 1 and np.max(np.abs(np.diff(phase))) > math.pi / 2:
        warnings.warn("adjacent phase step exceeds pi/2; refine the sweep",
                      SparseSweepWarning, stacklevel=2)
    # branch so that the far-detuned end sits at zero extra phase
    phase = phase - 2 * math.pi * np.round(phase[0] / (2 * math.pi))
    flags = np.abs(r_c) < PHASE_FLAG_AMPLITUDE
    return TraceSeries(deltas, phase, tag="phase_shift", x_unit="rad/us",
                       y_unit="rad", flags=flags)


def phase_winding(trace: TraceSeries) -> float:
    """Endpoint-to-endpoint change of an unwrapped phase trace."""
    return float(trace.y[-1] - trace.y[0])


def purcell_rate(p: SystemParams, delta_c: float) -> float:
    """Cavity-enhanced atomic decay rate ``gamma (1 + eta L(delta_c))`` for
    a resonant atom, with ``L`` a unit-height Lorentzian of FWHM ``kappa``."""
    return p.gamma * (1.0 + p.eta / (1.0 + (2.0 * delta_c / p.kappa)**2))


def decay_enhancement(p: SystemParams, delta_c_sweep) -> TraceSeries:
    dc = finite_array(delta_c_sweep, "delta_c_sweep")
    ratio = np.array([purcell_rate(p, d) / p.gamma for d in dc])
    return TraceSeries(dc, ratio, tag="decay_enhancement", x_unit="rad/us",
                       y_unit="Gamma/gamma")


@dataclass(frozen=True)
class SpectrumModel:
    """Empty-cavity interferometer spectrum versus laser detuning (GHz).

    ``kappa_wg`` and ``kappa_sc`` are angular rates in rad/us; ``nu_fsr`` is
    the interferometer free spectral range in GHz.
    """

    nu_fsr: float
    kappa_wg: float
    kappa_sc: float
    global_amplitude: float = 1.0
    global_phase: float = 0.0

    def __post_init__(self):
        if not self.nu_fsr > 0:
            raise ValueError("nu_fsr must be positive")
        if self.kappa_wg <= 0 or self.kappa_sc < 0:
            raise ValueError("invalid cavity decay rates")

    @classmethod
    def from_ghz(cls, nu_fsr, kappa_wg_ghz, kappa_sc_ghz, amplitude=1.0,
                 phase=0.0) -> "SpectrumModel":
        return cls(nu_fsr, two_pi_ghz(kappa_wg_ghz), two_pi_ghz(kappa_sc_ghz),
                   amplitude, phase)

    @property
    def k(self) -> float:
        return self.kappa_wg / (self.kappa_wg + self.kappa_sc)


def empty_cavity_reflection(kappa_wg, kappa_sc, nu_ghz):
    """``r_u`` at laser detuning ``nu`` (GHz) from the cavity resonance."""
    kappa = kappa_wg + kappa_sc
    delta_c = -two_pi_ghz(1.0) * np.asarray(nu_ghz, dtype=float)
    return 1.0 - kappa_wg / (kappa / 2.0 + 1j * delta_c)


def spectrum_signals(nu_fsr, kappa_wg, kappa_sc, amplitude, phase, nu):
    """Sum and difference of the two detector powers.

    The reference-arm reflectivity is matched to the resonant empty cavity,
    ``|r_V| = |1 - 2k|``, and the arms accumulate relative phase
    ``2 pi nu / nu_fsr``.
    """
    nu = np.asarray(nu, dtype=float)
    r_c = empty_cavity_reflection(kappa_wg, kappa_sc, nu)
    r_v = abs(1.0 - 2.0 * kappa_wg / (kappa_wg + kappa_sc))
    total = amplitude * 0.5 * (r_v**2 + np.abs(r_c)**2)
    arm_phase = 2.0 * math.pi * nu / nu_fsr + phase
    diff = amplitude * np.real(r_v * r_c * np.exp(-1j * arm_phase))
    return total, diff


def characterization_spectrum(model: SpectrumModel, nu):
    nu = finite_array(nu, "nu")
    total, diff = spectrum_signals(model.nu_fsr, model.kappa_wg,
                                   model.kappa_sc, model.global_amplitude,
                                   model.global_phase, nu)
    return (TraceSeries(nu, total, tag="D+A", x_unit="GHz", y_unit="arb"),
            TraceSeries(nu, diff, tag="D-A", x_unit="GHz", y_unit="arb"))


def reference_phase_fringe(p: SystemParams, phis, atom_present: bool,
                           theta: float = math.pi / 4) -> TraceSeries:
    """Normalized port-1 power ``A/(A+D)`` versus reference phase."""
    phis = finite_array(phis, "phis")
    frac = np.array([
        port_fields(p, InterferometerConfig(phi_v=phi, theta=theta),
                    atom_present).fraction_1 for phi in phis])
    tag = "A/P with atom" if atom_present else "A/P without atom"
    return TraceSeries(phis, frac, tag=tag, x_unit="rad", y_unit="fraction")
