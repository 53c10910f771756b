"""Physical parameters of the atom-cavity-interferometer system.

All rates are angular frequencies in rad/us and all times are in us.  The
helpers :func:`two_pi_mhz` and :func:`two_pi_ghz` convert the "2 pi x f"
notation used in the lab to this canonical unit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

TWO_PI = 2.0 * math.pi
NS = 1e-3  # one nanosecond in us


class ParameterError(ValueError):
    """Raised for parameter sets that violate physical invariants."""


class SingularityError(ArithmeticError):
    """Raised when a response function hits a non-physical pole."""


class NoCouplingWarning(UserWarning):
    """Emitted when a measured lifetime implies no cavity enhancement."""


def two_pi_mhz(f_mhz: float) -> float:
    """Angular frequency (rad/us) of ``2 pi x f_mhz`` MHz."""
    return TWO_PI * f_mhz


def two_pi_ghz(f_ghz: float) -> float:
    """Angular frequency (rad/us) of ``2 pi x f_ghz`` GHz."""
    return TWO_PI * 1e3 * f_ghz


def to_2pi_mhz(omega: float) -> float:
    return omega / TWO_PI


def to_2pi_ghz(omega: float) -> float:
    return omega / (TWO_PI * 1e3)


@dataclass(frozen=True)
class ComplexRates:
    kappa_tilde: complex
    gamma_tilde: complex
    eta_tilde: complex


@dataclass(frozen=True)
class SystemParams:
    """Rates of the driven atom-cavity system (rad/us).

    ``delta_a`` and ``delta_c`` are the atom-laser and cavity-laser detunings
    ``omega_a - omega_L`` and ``omega_c - omega_L``.  The laser-atom detuning
    ``delta`` used for spectra is ``-delta_a``.
    """

    g: float
    kappa_wg: float
    kappa_sc: float
    gamma: float
    delta_a: float = 0.0
    delta_c: float = 0.0

    def __post_init__(self):
        values = (self.g, self.kappa_wg, self.kappa_sc, self.gamma,
                  self.delta_a, self.delta_c)
        if not all(math.isfinite(v) for v in values):
            raise ParameterError(f"non-finite rate in {self!r}")
        # g = 0 is allowed: it is the "no atom" reference configuration.
        if self.g < 0:
            raise ParameterError("g must be non-negative")
        if self.kappa_wg <= 0 or self.gamma <= 0:
            raise ParameterError("kappa_wg and gamma must be positive")
        if self.kappa_sc < 0:
            raise ParameterError("kappa_sc must be non-negative")

    @classmethod
    def from_lab_units(cls, g_mhz, kappa_wg_ghz, kappa_sc_ghz, gamma_mhz,
                       delta_a_mhz=0.0, delta_c_mhz=0.0) -> "SystemParams":
        """Build from ``2 pi x`` MHz / GHz values."""
        return cls(
            g=two_pi_mhz(g_mhz),
            kappa_wg=two_pi_ghz(kappa_wg_ghz),
            kappa_sc=two_pi_ghz(kappa_sc_ghz),
            gamma=two_pi_mhz(gamma_mhz),
            delta_a=two_pi_mhz(delta_a_mhz),
            delta_c=two_pi_mhz(delta_c_mhz),
        )

    @classmethod
    def from_cooperativity(cls, eta: float, k: float, kappa: float,
                           gamma: float, delta_a: float = 0.0,
                           delta_c: float = 0.0) -> "SystemParams":
        """Build from cooperativity ``eta``, waveguide fraction ``k`` and the
        total cavity decay ``kappa``."""
        if not 0 < k <= 1:
            raise ParameterError("k must lie in (0, 1]")
        if eta < 0:
            raise ParameterError("eta must be non-negative")
        g = math.sqrt(eta * kappa * gamma / 4.0)
        kappa_wg = k * kappa
        return cls(g=g, kappa_wg=kappa_wg, kappa_sc=kappa - kappa_wg,
                   gamma=gamma, delta_a=delta_a, delta_c=delta_c)

    @property
    def kappa(self) -> float:
        return self.kappa_wg + self.kappa_sc

    @property
    def k(self) -> float:
        return self.kappa_wg / self.kappa

    @property
    def eta(self) -> float:
        """On-resonance cooperativity ``4 g^2 / (kappa gamma)``."""
        return 4.0 * self.g**2 / (self.kappa * self.gamma)

    @property
    def delta(self) -> float:
        """Laser-atom detuning ``omega_L - omega_a``."""
        return -self.delta_a

    @property
    def purcell_rate(self) -> float:
        """Resonant cavity-enhanced decay rate ``(1 + eta) gamma``."""
        return (1.0 + self.eta) * self.gamma

    def with_delta(self, delta: float) -> "SystemParams":
        return replace(self, delta_a=-delta)

    def replace(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    # flat key = value config ------------------------------------------------

    def to_config(self) -> dict[str, float]:
        return {
            "g_2pi_MHz": to_2pi_mhz(self.g),
            "kappa_wg_2pi_GHz": to_2pi_ghz(self.kappa_wg),
            "kappa_sc_2pi_GHz": to_2pi_ghz(self.kappa_sc),
            "gamma_2pi_MHz": to_2pi_mhz(self.gamma),
            "delta_a_2pi_MHz": to_2pi_mhz(self.delta_a),
            "delta_c_2pi_MHz": to_2pi_mhz(self.delta_c),
        }

    @classmethod
    def from_config(cls, cfg: dict[str, float],
                    base: "SystemParams | None" = None) -> "SystemParams":
        """Build from config keys; missing keys fall back to ``base``."""
        merged = (base or LAB_PARAMS).to_config()
        unknown = set(cfg) - set(merged)
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        merged.update({key: float(val) for key, val in cfg.items()})
        return cls.from_lab_units(
            merged["g_2pi_MHz"], merged["kappa_wg_2pi_GHz"],
            merged["kappa_sc_2pi_GHz"], merged["gamma_2pi_MHz"],
            merged["delta_a_2pi_MHz"], merged["delta_c_2pi_MHz"])


def derive_rates(p: SystemParams) -> ComplexRates:
    """Complex decay rates and the complex cooperativity ``g^2/(k~ g~)``."""
    kappa_tilde = complex(p.kappa / 2.0, p.delta_c)
    gamma_tilde = complex(p.gamma / 2.0, p.delta_a)
    eta_tilde = p.g**2 / (kappa_tilde * gamma_tilde)
    return ComplexRates(kappa_tilde, gamma_tilde, eta_tilde)


def cooperativity_from_lifetime(tau: float, gamma: float) -> float:
    """Cooperativity ``(Gamma - gamma)/gamma`` from a measured lifetime.

    ``tau`` is the excited-state lifetime ``1/Gamma`` (us) and ``gamma`` the
    free-space population decay rate (1/us).  A lifetime at or above the
    free-space value yields ``eta <= 0`` and a :class:`NoCouplingWarning`.
    """
    if not (tau > 0 and gamma > 0):
        raise ParameterError("tau and gamma must be positive")
    eta = (1.0 / tau - gamma) / gamma
    if eta <= 0:
        warnings.warn(f"lifetime {tau} us shows no cavity enhancement "
                      f"(eta = {eta:.3g})", NoCouplingWarning, stacklevel=2)
    return eta


@dataclass(frozen=True)
class InterferometerConfig:
    """Reference-arm phase, input polarization angle and detection angle."""

    phi_v: float = 0.0
    theta: float = math.pi / 4
    theta_prime: float = math.pi / 4

    @classmethod
    def dark_port(cls, k: float, phi_v: float = 0.0) -> "InterferometerConfig":
        """Input angle with ``tan(theta) = 2k - 1``, which nulls port 1 for a
        resonant empty cavity at ``phi_v = 0``."""
        if not 0 < k <= 1:
            raise ParameterError("k must lie in (0, 1]")
        return cls(phi_v=phi_v, theta=math.atan(2.0 * k - 1.0))


# 2g = 2 pi x 1.09 GHz, kappa_wg / kappa_sc from the interferometer fit,
# gamma = 2 pi x 6 MHz.
LAB_PARAMS = SystemParams.from_lab_units(
    g_mhz=545.0, kappa_wg_ghz=20.3, kappa_sc_ghz=5.2, gamma_mhz=6.0)


def read_config(path: str | Path) -> dict[str, float]:
    """Parse a flat ``key = value`` file (``#`` starts a comment)."""
    out: dict[str, float] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParameterError(f"{path}:{lineno}: expected 'key = value'")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise ParameterError(
                f"{path}:{lineno}: {value.strip()!r} is not a number") from None
    return out


def write_config(p: SystemParams, path: str | Path) -> None:
    lines = [f"{key} = {val!r}" for key, val in p.to_config().items()]
    Path(path).write_text("\n".join(lines) + "\n")


def load_params(path: str | Path) -> SystemParams:
    return SystemParams.from_config(read_config(path))


def finite_array(x, name="input") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{name} contains non-finite values")
    return arr
