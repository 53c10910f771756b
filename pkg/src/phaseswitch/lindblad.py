"""Driven Jaynes-Cummings master equation on a truncated Fock space.

States live on atom (x) cavity with the atom index slow and the photon
number fast; atomic basis index 0 is the ground state.  Superoperators act
on column-stacked density matrices, ``vec(A X B) = (B^T kron A) vec(X)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .params import InterferometerConfig, SystemParams
from .traces import TraceSeries

MAX_FOCK = 30
TRUNCATION_LIMIT = 1e-6


class ConvergenceError(RuntimeError):
    """Steady-state or fit procedure did not reach its target."""


class DarkPortWarning(UserWarning):
    """Port intensity too small for a meaningful normalized correlation."""


class TruncationWarning(UserWarning):
    """Top Fock level carries non-negligible population."""


@dataclass(frozen=True)
class HilbertConfig:
    n_max: int = 6

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError("n_max must be at least 2")
        if self.n_max > MAX_FOCK:
            raise ValueError(f"n_max > {MAX_FOCK} exceeds the dense "
                             "superoperator size guard")

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)


@dataclass
class QuantumState:
    rho: np.ndarray
    n_max: int

    def expect(self, op: np.ndarray) -> complex:
        return complex(np.trace(op @ self.rho))

    def fock_populations(self) -> np.ndarray:
        return self.rho.diagonal().real.reshape(2, self.n_max + 1).sum(axis=0)

    @property
    def top_population(self) -> float:
        return float(self.fock_populations()[-1])

    @property
    def truncation_ok(self) -> bool:
        return self.top_population < TRUNCATION_LIMIT

    def check(self, atol: float = 1e-10) -> None:
        rho = self.rho
        if abs(np.trace(rho) - 1.0) > atol:
            raise ValueError("density matrix is not normalized")
        if np.max(np.abs(rho - rho.conj().T)) > atol:
            raise ValueError("density matrix is not Hermitian")
        if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -1e-9:
            raise ValueError("density matrix is not positive")


@lru_cache(maxsize=None)
def _operators(n_max: int):
    nf = n_max + 1
    a = np.diag(np.sqrt(np.arange(1, nf, dtype=float)), 1).astype(complex)
    sm = np.array([[0, 1], [0, 0]], dtype=complex)  # |g><e|
    a_full = np.kron(np.eye(2), a)
    s_full = np.kron(sm, np.eye(nf))
    return a_full, s_full


def operators(h: HilbertConfig):
    """Cavity lowering ``a`` and atomic lowering ``sigma`` on the full space."""
    a, s = _operators(h.n_max)
    return a.copy(), s.copy()


def sigma_z(h: HilbertConfig) -> np.ndarray:
    _, s = _operators(h.n_max)
    return s.conj().T @ s - s @ s.conj().T


def vec(rho: np.ndarray) -> np.ndarray:
    return rho.reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return v.reshape(dim, dim, order="F")


def hamiltonian(p: SystemParams, drive_amplitude: complex,
                h: HilbertConfig) -> np.ndarray:
    """Rotating-frame Hamiltonian with coherent waveguide drive.

    The drive ``eps a^dag + h.c.`` uses ``eps = -i sqrt(kappa_wg) <a_in>``
    so that the cavity equation of motion acquires the input term
    ``-sqrt(kappa_wg) <a_in>``.
    """
    a, s = _operators(h.n_max)
    ad, sd = a.conj().T, s.conj().T
    eps = -1j * math.sqrt(p.kappa_wg) * drive_amplitude
    return (0.5 * p.delta_a * sigma_z(h) + p.delta_c * ad @ a
            + p.g * (ad @ s + a @ sd) + eps * ad + np.conj(eps) * a)


def build_liouvillian(p: SystemParams, drive_amplitude: complex,
                      h: HilbertConfig) -> np.ndarray:
    """Dense generator ``L`` with ``d vec(rho)/dt = L vec(rho)``.

    Collapse operators are ``sqrt(kappa) a`` (all cavity decay) and
    ``sqrt(gamma) sigma``.
    """
    a, s = _operators(h.n_max)
    H = hamiltonian(p, drive_amplitude, h)
    eye = np.eye(h.dim)
    L = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    for c in (math.sqrt(p.kappa) * a, math.sqrt(p.gamma) * s):
        cdc = c.conj().T @ c
        L += (np.kron(c.conj(), c) - 0.5 * np.kron(eye, cdc)
              - 0.5 * np.kron(cdc.T, eye))
    return L


def _lu_degenerate(m: np.ndarray) -> bool:
    with warnings.catch_warnings():
        # an exactly singular pivot is the case being detected
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, _ = scipy.linalg.lu_factor(m, check_finite=False)
    diag = np.abs(np.diag(lu))
    return diag.min() < 1e-13 * diag.max()


def steady_state(L: np.ndarray, n_max: int | None = None,
                 tol: float = 1e-10) -> QuantumState:
    """Null vector of ``L`` normalized to unit trace.

    One row of ``L`` is replaced by the trace functional; a singular result
    means the null space is degenerate.  If the residual
    ``||L rho|| / ||L||`` misses ``tol`` the solution is refined by long-time
    propagation.
    """
    d2 = L.shape[0]
    dim = int(round(math.sqrt(d2)))
    if n_max is None:
        n_max = dim // 2 - 1
    tr = vec(np.eye(dim))
    m = L.copy()
    m[0, :] = tr
    if _lu_degenerate(m):
        raise ConvergenceError("steady state is not unique (degenerate "
                               "null space)")
    rhs = np.zeros(d2, dtype=complex)
    rhs[0] = 1.0
    v = scipy.linalg.solve(m, rhs, check_finite=False)
    scale = np.linalg.norm(L, ord=np.inf)
    if np.linalg.norm(L @ v) > tol * scale:
        v = _relax(L, v, tr, scale, tol)
    rho = unvec(v, dim)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    state = QuantumState(rho, n_max)
    if not state.truncation_ok:
        warnings.warn(f"top Fock level population {state.top_population:.2e} "
                      f"exceeds {TRUNCATION_LIMIT}; increase n_max",
                      TruncationWarning, stacklevel=2)
    return state


def _relax(L, v, tr, scale, tol):
    # slowest rate sets the propagation time
    rates = np.abs(np.linalg.eigvals(L).real)
    slow = rates[rates > 1e-12 * scale].min()
    step = scipy.linalg.expm(L * (10.0 / slow))
    for _ in range(50):
        v = step @ v
        v /= tr @ v
        if np.linalg.norm(L @ v) <= tol * scale:
            return v
    raise ConvergenceError("steady-state residual target not met")


class Propagator:
    """Caches ``expm(L dt)`` per step size."""

    def __init__(self, L: np.ndarray):
        self.L = L
        self._cache: dict[float, np.ndarray] = {}

    def step(self, dt: float) -> np.ndarray:
        key = float(dt)
        if key not in self._cache:
            self._cache[key] = scipy.linalg.expm(self.L * key)
        return self._cache[key]

    def evolve(self, rho0: np.ndarray, times) -> list[np.ndarray]:
        """Density matrices at ascending ``times`` (starting from t=0)."""
        times = np.asarray(times, dtype=float)
        if np.any(np.diff(times) < 0) or times[0] < 0:
            raise ValueError("times must be ascending and non-negative")
        dim = rho0.shape[0]
        v = vec(rho0).astype(complex)
        out = []
        t_prev = 0.0
        # round increments so uniform grids hit the cache
        for t in times:
            dt = float(np.round(t - t_prev, 15))
            if dt > 0:
                v = self.step(dt) @ v
            out.append(unvec(v, dim))
            t_prev = t
        return out


@dataclass(frozen=True)
class PortOperator:
    """Affine port field ``d = A b_s + w a (+ C b_v)``.

    ``A`` and ``C`` are per unit input amplitude; ``b_v`` is the undriven
    orthogonal input and never contributes to normally ordered moments.
    """

    A: complex
    w: float
    C: complex

    def operator(self, b_s: complex, h: HilbertConfig) -> np.ndarray:
        a, _ = _operators(h.n_max)
        return self.A * b_s * np.eye(h.dim) + self.w * a


def port_operators(p: SystemParams, cfg: InterferometerConfig):
    """``{"A": d1, "D": d2}`` for the given interferometer setting."""
    ct, st = math.cos(cfg.theta), math.sin(cfg.theta)
    cp, sp = math.cos(cfg.theta_prime), math.sin(cfg.theta_prime)
    ev = complex(np.exp(1j * cfg.phi_v))
    root = math.sqrt(p.kappa_wg)
    d1 = PortOperator(A=cp * ct + sp * ev * st, w=root * cp,
                      C=-cp * st + sp * ev * ct)
    d2 = PortOperator(A=-sp * ct + cp * ev * st, w=-root * sp,
                      C=sp * st + cp * ev * ct)
    return {"A": d1, "D": d2}


@dataclass
class PortStatistics:
    intensity: float
    g2: np.ndarray
    taus: np.ndarray


class DrivenSystem:
    """Steady state and port correlations for one parameter point.

    ``drive_amplitude`` is the coherent interferometer input ``b_s``
    (photons^1/2 us^-1/2); the cavity sees ``b_s cos(theta)``.
    """

    def __init__(self, p: SystemParams, b_s: complex,
                 h: HilbertConfig = HilbertConfig(),
                 cfg: InterferometerConfig | None = None):
        self.p = p
        self.b_s = b_s
        self.h = h
        self.cfg = cfg or InterferometerConfig.dark_port(p.k)
        self.a_in = b_s * math.cos(self.cfg.theta)
        self.L = build_liouvillian(p, self.a_in, h)
        self.state = steady_state(self.L, h.n_max)
        self._prop = Propagator(self.L)
        self._ports = port_operators(p, self.cfg)

    @classmethod
    def from_Y(cls, p, Y, h=HilbertConfig(), cfg=None):
        cfg = cfg or InterferometerConfig.dark_port(p.k)
        from .saturation import waveguide_amplitude_from_Y
        a_in = waveguide_amplitude_from_Y(p, Y)
        return cls(p, a_in / math.cos(cfg.theta), h, cfg)

    def port_operator(self, port: str) -> np.ndarray:
        return self._ports[port].operator(self.b_s, self.h)

    def expect(self, op) -> complex:
        return self.state.expect(op)

    def sigma(self) -> complex:
        return self.expect(_operators(self.h.n_max)[1])

    def sigma_z(self) -> float:
        return self.expect(sigma_z(self.h)).real

    def cavity_field(self) -> complex:
        return self.expect(_operators(self.h.n_max)[0])

    def output_field(self) -> complex:
        """Coherent part of the reflected waveguide field ``<a_wg,out>``."""
        return self.a_in + math.sqrt(self.p.kappa_wg) * self.cavity_field()

    def intensity(self, port: str) -> float:
        d = self.port_operator(port)
        return self.expect(d.conj().T @ d).real

    def port_statistics(self, port: str, taus) -> PortStatistics:
        """Intensity and ``g2(tau)`` via the quantum regression theorem."""
        taus = np.asarray(taus, dtype=float)
        d = self.port_operator(port)
        dd = d.conj().T
        n_op = dd @ d
        intensity = self.expect(n_op).real
        if intensity < 1e-14:
            warnings.warn(f"port {port} intensity {intensity:.2e} is "
                          "near zero; g2 is ill-conditioned",
                          DarkPortWarning, stacklevel=2)
        collapsed = d @ self.state.rho @ dd
        g2 = np.array([np.trace(n_op @ r).real
                       for r in self._prop.evolve(collapsed, taus)])
        return PortStatistics(intensity, g2 / intensity**2, taus)


def g2(p: SystemParams, drive: complex, h: HilbertConfig, port: str,
       taus, cfg: InterferometerConfig | None = None) -> TraceSeries:
    """Normalized intensity correlation at port ``"A"`` (d1) or ``"D"``
    (d2) for interferometer input amplitude ``drive`` and ``tau >= 0``."""
    system = DrivenSystem(p, drive, h, cfg)
    stats = system.port_statistics(port, taus)
    return TraceSeries(stats.taus, stats.g2, tag=f"g2_{port}",
                       x_unit="us", y_unit="")
