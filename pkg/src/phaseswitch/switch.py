"""Atomic phase switch driven by a weak coherent gate pulse.

The atom starts in ``(|u> + |c>)/sqrt(2)``.  A coherent gate field ``alpha``
scatters into three output modes (waveguide, cavity loss, free space) with
amplitudes that depend on the atomic branch.  Tracing out the light leaves
a 2x2 atomic density matrix in the ``{u, c}`` basis; conditioning on a
reflected photon applies the waveguide annihilation operator first.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp
from scipy.stats import poisson

from .linres import ScatteringAmplitudes, scattering_amplitudes
from .params import SystemParams
from .traces import TraceSeries

PLUS = np.array([1.0, 1.0]) / math.sqrt(2.0)
MINUS = np.array([1.0, -1.0]) / math.sqrt(2.0)


class UnbalancedSwitchWarning(UserWarning):
    """``|r_u| != |r_c|``: the balanced success-probability formula is
    only approximate."""


@dataclass(frozen=True)
class BranchOutput:
    """Coherent amplitudes in (waveguide, loss, free-space) modes for the
    uncoupled (``u``) and coupled (``c``) atomic branches."""

    alpha: complex
    u: tuple[complex, complex, complex]
    c: tuple[complex, complex, complex]

    def __post_init__(self):
        if self.u[2] != 0:
            raise ValueError("uncoupled branch cannot emit into free space")

    @classmethod
    def from_amplitudes(cls, amps: ScatteringAmplitudes,
                        alpha: complex) -> "BranchOutput":
        return cls(alpha, tuple(alpha * x for x in amps.branch("u")),
                   tuple(alpha * x for x in amps.branch("c")))


def coherent_overlap(b: BranchOutput) -> complex:
    """``<c-branch light | u-branch light>`` for product coherent states."""
    u = np.asarray(b.u, dtype=complex)
    c = np.asarray(b.c, dtype=complex)
    return complex(np.exp(np.sum(-0.5 * np.abs(u)**2 - 0.5 * np.abs(c)**2
                                 + np.conj(c) * u)))


class AtomDensityMatrix:
    """2x2 density matrix in the ``{u, c}`` basis."""

    def __init__(self, rho, atol: float = 1e-10):
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (2, 2):
            raise ValueError("atomic density matrix must be 2x2")
        if abs(np.trace(rho) - 1) > atol:
            raise ValueError("trace must be 1")
        if np.max(np.abs(rho - rho.conj().T)) > atol:
            raise ValueError("matrix must be Hermitian")
        if np.linalg.eigvalsh(rho).min() < -atol:
            raise ValueError("matrix must be positive semidefinite")
        self.rho = rho

    @property
    def coherence(self) -> complex:
        """Off-diagonal element ``rho_uc``."""
        return complex(self.rho[0, 1])

    def fidelity(self, state) -> float:
        state = np.asarray(state, dtype=complex)
        return float((state.conj() @ self.rho @ state).real)

    def __repr__(self):
        return f"AtomDensityMatrix({self.rho.tolist()!r})"


def switch_densities(p: SystemParams, alpha: complex):
    """Atomic state after the gate pulse: ``(unconditioned, conditioned)``.

    The conditioned state assumes at least one photon was detected in the
    reflected waveguide mode.  With ``alpha = 0`` the conditioned state is
    the single-photon limit.
    """
    amps = scattering_amplitudes(p)
    D = coherent_overlap(BranchOutput.from_amplitudes(amps, alpha))
    uncond = 0.5 * np.array([[1.0, D], [np.conj(D), 1.0]])
    ru, rc = amps.r_u, amps.r_c
    norm = abs(ru)**2 + abs(rc)**2
    if norm == 0:
        raise ZeroDivisionError("no reflected light: conditioning undefined")
    off = D * np.conj(rc) * ru
    cond = np.array([[abs(ru)**2, off], [np.conj(off), abs(rc)**2]]) / norm
    return AtomDensityMatrix(uncond), AtomDensityMatrix(cond)


def gate_fidelities(p: SystemParams, alpha: complex) -> dict:
    """``P_uncond = <+|rho|+>`` and ``P_cond = <-|rho_cond|->``."""
    uncond, cond = switch_densities(p, alpha)
    return {"P_uncond": uncond.fidelity(PLUS), "P_cond": cond.fidelity(MINUS)}


def balanced_fidelity(r: float, n_photons: float) -> float:
    """Gate fidelity ``(1 + exp(-(1 + r^2) n))/2`` for ``r_u = -r_c = r``
    and a strongly coupled atom."""
    return 0.5 * (1.0 + math.exp(-(1.0 + r**2) * n_photons))


def ramsey_probability(rho: AtomDensityMatrix, theta) -> np.ndarray:
    """Probability of ending in ``|c>`` after a pi/2 pulse of phase theta.

    The pulse maps ``<c|`` to ``(e^{-i theta}, 1)/sqrt(2)`` so that the
    fringe is ``(1 + 2|rho_uc| cos(theta - arg rho_uc))/2``.
    """
    theta = np.asarray(theta, dtype=float)
    row = np.stack([np.exp(-1j * theta), np.ones_like(theta)], axis=-1)
    row = row / math.sqrt(2.0)
    return np.einsum("...i,ij,...j->...", row, rho.rho, row.conj()).real


def ramsey_fringe(p: SystemParams, alpha: complex, thetas,
                  conditioned: bool) -> TraceSeries:
    thetas = np.asarray(thetas, dtype=float)
    uncond, cond = switch_densities(p, alpha)
    rho = cond if conditioned else uncond
    tag = "P_on conditioned" if conditioned else "P_on unconditioned"
    return TraceSeries(thetas, ramsey_probability(rho, thetas), tag=tag,
                       x_unit="rad", y_unit="probability")


def no_gate_fringe(thetas) -> TraceSeries:
    rho = AtomDensityMatrix(np.outer(PLUS, PLUS))
    thetas = np.asarray(thetas, dtype=float)
    return TraceSeries(thetas, ramsey_probability(rho, thetas),
                       tag="P_on no gate", x_unit="rad", y_unit="probability")


def fringe_phase(rho: AtomDensityMatrix) -> float:
    return float(np.angle(rho.coherence))


def fringe_shift(p: SystemParams, alpha: complex, conditioned: bool) -> float:
    """Fringe phase relative to the no-gate fringe, wrapped to (-pi, pi]."""
    uncond, cond = switch_densities(p, alpha)
    phi = fringe_phase(cond if conditioned else uncond)
    return float(-((-phi + math.pi) % (2 * math.pi) - math.pi)) + 0.0


def switch_success_probability(p: SystemParams, alpha: complex,
                               eta_c: float, rtol: float = 1e-3) -> float:
    """Probability ``2 eps eta_c r^2/(1 + r^2)`` of flipping the switch.

    ``eps = 1 - P_cond`` is the gate error and ``r = |r_u|``.  Warns when the
    reflection amplitudes are not balanced.
    """
    if not 0 <= eta_c <= 1:
        raise ValueError("eta_c must lie in [0, 1]")
    amps = scattering_amplitudes(p)
    r_u, r_c = abs(amps.r_u), abs(amps.r_c)
    if abs(r_u - r_c) > rtol * max(r_u, r_c):
        warnings.warn(f"|r_u| = {r_u:.4f} and |r_c| = {r_c:.4f} are not "
                      "balanced", UnbalancedSwitchWarning, stacklevel=2)
    eps = abs(gate_fidelities(p, alpha)["P_cond"] - 1.0)
    return 2.0 * eps * eta_c * r_u**2 / (1.0 + r_u**2)


# readout statistics --------------------------------------------------------

@dataclass(frozen=True)
class ReadoutModel:
    """Mean counts with (``lambda_on``) and without (``lambda_off``) a
    coupled atom; counts above ``threshold`` are assigned "atom present"."""

    lambda_on: float
    lambda_off: float
    threshold: int = 1

    def __post_init__(self):
        if not self.lambda_on > self.lambda_off >= 0:
            raise ValueError("need lambda_on > lambda_off >= 0")
        if self.threshold < 1:
            raise ValueError("threshold must be at least 1")


def readout_fidelity(m: ReadoutModel):
    """Poisson-limited assignment fidelities ``(f_on, f_off, mean)``."""
    f_on = float(poisson.sf(m.threshold, m.lambda_on))
    f_off = float(poisson.cdf(m.threshold, m.lambda_off)) \
        if m.lambda_off > 0 else 1.0
    return f_on, f_off, 0.5 * (f_on + f_off)


def _log_pmf(counts, lam):
    if lam == 0:
        return np.where(counts == 0, 0.0, -np.inf)
    return poisson.logpmf(counts, lam)


def atom_presence_posterior(counts, m: ReadoutModel):
    """Per-measurement and change-point probabilities that the atom was
    present.

    The change-point model assumes the atom is lost once and for all before
    one of the measurements (or never), with a uniform prior over those
    ``N + 1`` hypotheses.
    """
    counts = np.asarray(counts, dtype=int)
    if counts.size == 0:
        return np.zeros(0), np.zeros(0)
    if np.any(counts < 0):
        raise ValueError("counts must be non-negative")
    log_on = _log_pmf(counts, m.lambda_on)
    log_off = _log_pmf(counts, m.lambda_off)
    p_individual = 1.0 / (1.0 + np.exp(log_off - log_on))
    # hypothesis j: present for i < j, absent for i >= j
    head = np.concatenate([[0.0], np.cumsum(log_on)])
    tail = np.concatenate([np.cumsum(log_off[::-1])[::-1], [0.0]])
    log_post = head + tail
    log_post -= logsumexp(log_post)
    # P(j > i) for each i
    rev = np.logaddexp.accumulate(log_post[::-1])[::-1]
    p_changepoint = np.exp(rev[1:])
    return p_individual, np.minimum(p_changepoint, 1.0)


def posterior_rows(counts, m: ReadoutModel) -> list[tuple]:
    p_ind, p_cp = atom_presence_posterior(counts, m)
    return [(i, int(n), float(a), float(b))
            for i, (n, a, b) in enumerate(zip(counts, p_ind, p_cp))]
