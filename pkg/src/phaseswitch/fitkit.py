"""Least-squares fits for lifetime, fringe and interferometer spectra.

All fits use Levenberg-Marquardt (MINPACK via ``scipy.optimize``) with a
central-difference Jacobian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import least_squares

from .linres import spectrum_signals
from .params import two_pi_ghz

JAC_STEP = 1e-6


@dataclass
class FitResult:
    params: np.ndarray
    covariance: np.ndarray
    residual_norm: float
    converged: bool
    n_iterations: int
    names: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict)

    @property
    def errors(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))

    def __getitem__(self, name: str) -> float:
        return float(self.params[self.names.index(name)])

    def error(self, name: str) -> float:
        return float(self.errors[self.names.index(name)])

    def as_dict(self) -> dict:
        return {
            "params": {n: float(v) for n, v in zip(self.names, self.params)},
            "errors": {n: float(e) for n, e in zip(self.names, self.errors)},
            "residual_norm": float(self.residual_norm),
            "converged": bool(self.converged),
            "n_iterations": int(self.n_iterations),
            "flags": list(self.flags),
            **self.extra,
        }


def central_jacobian(fun: Callable, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(x.size):
        h = JAC_STEP * max(abs(x[j]), 1.0)
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        cols.append((fun(xp) - fun(xm)) / (2.0 * h))
    return np.stack(cols, axis=1)


def levenberg_marquardt(residuals: Callable, x0: Sequence[float],
                        names: Sequence[str], absolute_sigma: bool,
                        max_nfev: int = 20000) -> FitResult:
    """Minimize ``sum(residuals(x)^2)`` from ``x0``.

    With ``absolute_sigma`` the residuals are taken as already normalized by
    their standard errors; otherwise the covariance is rescaled by the
    reduced chi-square.
    """
    x0 = np.asarray(x0, dtype=float)
    sol = least_squares(residuals, x0, jac=lambda x: central_jacobian(
        residuals, x), method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15,
        max_nfev=max_nfev)
    res = sol.fun
    jac = central_jacobian(residuals, sol.x)
    m, n = res.size, x0.size
    flags = []
    try:
        cov = np.linalg.pinv(jac.T @ jac, rcond=1e-13, hermitian=True)
    except np.linalg.LinAlgError:
        cov = np.full((n, n), np.nan)
        flags.append("singular_jacobian")
    if not absolute_sigma:
        dof = max(m - n, 1)
        cov = cov * float(res @ res) / dof
    cov = 0.5 * (cov + cov.T)
    converged = bool(sol.success) and sol.status > 0
    if not converged:
        flags.append("not_converged")
    return FitResult(sol.x, cov, float(np.linalg.norm(res)), converged,
                     int(sol.nfev), tuple(names), tuple(flags))


def poisson_sigma(ys) -> np.ndarray:
    return np.sqrt(np.maximum(np.asarray(ys, dtype=float), 1.0))


def fit_exponential(ts, ys, window_start: float, sigmas=None) -> FitResult:
    """Fit ``A exp(-t/tau) + B`` to points with ``t >= window_start``.

    Without ``sigmas`` the data are treated as counts with errors
    ``sqrt(max(y, 1))``.  Parameters are ``(A, tau, B)``.
    """
    ts = np.asarray(ts, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = ts >= window_start
    if keep.sum() < 4:
        raise ValueError("need at least 4 points after window_start")
    t, y = ts[keep], ys[keep]
    s = poisson_sigma(y) if sigmas is None else np.asarray(sigmas)[keep]
    t0 = t[0]

    def model(x):
        amp, tau, offset = x
        return amp * np.exp(-(t - t0) / tau) + offset

    offset0 = float(np.min(y))
    amp0 = max(float(y[0] - offset0), 1e-12)
    # initial tau from the 1/e crossing
    below = np.nonzero(y - offset0 < amp0 / math.e)[0]
    tau0 = float(t[below[0]] - t0) if below.size and below[0] > 0 \
        else float(t[-1] - t0) / 3.0
    fit = levenberg_marquardt(lambda x: (model(x) - y) / s,
                              [amp0, tau0, offset0], ("A", "tau", "B"),
                              absolute_sigma=True)
    # report A at t = 0 rather than at the window start
    scale = math.exp(t0 / fit.params[1])
    jac = np.eye(3)
    jac[0, 0] = scale
    jac[0, 1] = -fit.params[0] * scale * t0 / fit.params[1]**2
    fit.params = fit.params.copy()
    fit.params[0] *= scale
    fit.covariance = jac @ fit.covariance @ jac.T
    if fit.params[1] <= 0:
        fit.flags += ("non_positive_tau",)
        fit.converged = False
    return fit


def fit_sinusoid(xs, ys, sigmas=None, v_floor: float = 1e-9) -> FitResult:
    """Fit ``C + V cos(x - phi)``; parameters ``(C, V, phi)``.

    The linear least-squares solution seeds the nonlinear fit.  Visibility
    ``V/C`` is stored in ``extra``; a vanishing ``V`` marks the phase
    undefined.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if np.ptp(xs) < 2 * math.pi * (1 - 1e-9) * (1 - 1 / max(len(xs), 2)):
        raise ValueError("xs must span at least one period")
    s = np.ones_like(ys) if sigmas is None else np.asarray(sigmas, float)
    basis = np.stack([np.ones_like(xs), np.cos(xs), np.sin(xs)], axis=1)
    c, a, b = np.linalg.lstsq(basis / s[:, None], ys / s, rcond=None)[0]
    v0, phi0 = math.hypot(a, b), math.atan2(b, a)
    if v0 < v_floor * max(abs(c), 1.0):
        cov = np.full((3, 3), np.nan)
        return FitResult(np.array([c, 0.0, np.nan]), cov,
                         float(np.linalg.norm((basis @ [c, 0, 0] - ys) / s)),
                         False, 0, ("C", "V", "phi"),
                         ("degenerate_amplitude", "phase_undefined"),
                         {"visibility": 0.0})

    def resid(x):
        return (x[0] + x[1] * np.cos(xs - x[2]) - ys) / s

    fit = levenberg_marquardt(resid, [c, v0, phi0], ("C", "V", "phi"),
                              absolute_sigma=sigmas is not None)
    if fit.params[1] < 0:
        fit.params[1] = -fit.params[1]
        fit.params[2] += math.pi
    fit.params[2] = (fit.params[2] + math.pi) % (2 * math.pi) - math.pi
    fit.extra["visibility"] = float(fit.params[1] / fit.params[0])
    return fit


SPECTRUM_NAMES = ("nu_fsr", "kappa_wg", "kappa_sc", "phase", "amplitude")


def _spectrum_residuals(nus, sum_ys, diff_ys, scale, fixed):
    def resid(x):
        full = _expand(x, fixed)
        nu_fsr, kwg, ksc, phase, amp = full
        total, diff = spectrum_signals(nu_fsr, two_pi_ghz(kwg),
                                       two_pi_ghz(abs(ksc)), amp, phase, nus)
        return np.concatenate([(total - sum_ys) / scale,
                               (diff - diff_ys) / scale])
    return resid


def _expand(x, fixed):
    full, it = [], iter(x)
    for i in range(len(SPECTRUM_NAMES)):
        full.append(fixed[i] if i in fixed else next(it))
    return full


def fit_spectrum(nus, sum_ys, diff_ys, n_starts: int = 8, seed: int = 0,
                 fixed: dict[str, float] | None = None,
                 x0: Sequence[float] | None = None) -> FitResult:
    """Joint fit of the interferometer sum and difference signals.

    Parameters ``(nu_fsr [GHz], kappa_wg [2 pi GHz], kappa_sc [2 pi GHz],
    phase, amplitude)``.  Several starts are run; the fit is flagged
    ``ambiguous`` when the best solutions disagree beyond one standard
    error, and ``flat_sum`` when the sum signal carries no cavity dip.
    Entries of ``fixed`` hold parameters at given values.
    """
    nus = np.asarray(nus, dtype=float)
    sum_ys = np.asarray(sum_ys, dtype=float)
    diff_ys = np.asarray(diff_ys, dtype=float)
    fixed = {SPECTRUM_NAMES.index(k): v for k, v in (fixed or {}).items()}
    free = [i for i in range(len(SPECTRUM_NAMES)) if i not in fixed]
    names = tuple(SPECTRUM_NAMES[i] for i in free)
    scale = max(float(np.max(np.abs(sum_ys))), 1e-300)
    resid = _spectrum_residuals(nus, sum_ys, diff_ys, scale, fixed)
    flags = []
    if np.ptp(sum_ys) <= 1e-6 * scale:
        flags.append("flat_sum")

    starts = _spectrum_starts(nus, sum_ys, diff_ys, n_starts, seed)
    if x0 is not None:
        starts.insert(0, np.asarray(x0, dtype=float))
    fits = []
    for start in starts:
        fit = levenberg_marquardt(resid, [start[i] for i in free], names,
                                  absolute_sigma=False)
        fits.append(fit)
    fits.sort(key=lambda f: f.residual_norm)
    best = fits[0]
    if "kappa_sc" in names:
        best.params[names.index("kappa_sc")] = abs(best["kappa_sc"])
    best_cost = best.residual_norm**2
    tol_cost = best_cost * 1e-3 + 1e-24
    close = [f for f in fits[1:]
             if f.residual_norm**2 - best_cost <= tol_cost]
    errs = np.where(best.errors > 0, best.errors, np.inf)
    for f in close:
        p = f.params.copy()
        if "kappa_sc" in names:
            p[names.index("kappa_sc")] = abs(p[names.index("kappa_sc")])
        dphi = 0.0
        if "phase" in names:
            j = names.index("phase")
            dphi = (p[j] - best.params[j] + math.pi) % (2 * math.pi) - math.pi
            p[j] = best.params[j] + dphi
        dev = np.abs(p - best.params)
        tight = np.maximum(errs, 1e-6 * np.abs(best.params) + 1e-12)
        if np.any(dev > tight):
            flags.append("ambiguous")
            break
    if not close:
        flags.append("unconfirmed_minimum")
    best.flags = tuple(dict.fromkeys(best.flags + tuple(flags)))
    best.extra["n_starts"] = len(fits)
    best.extra["n_agreeing"] = len(close) + 1
    if "kappa_wg" in names and "kappa_sc" in names:
        kwg, ksc = best["kappa_wg"], best["kappa_sc"]
        best.extra["k"] = kwg / (kwg + ksc)
    return best


def _spectrum_starts(nus, sum_ys, diff_ys, n_starts, seed):
    """Seeds for the spectrum fit.

    Amplitude, ``k`` and linewidth follow from the depth and width of the
    sum-signal dip; ``(nu_fsr, phase)`` candidates come from a coarse grid
    scan of the difference signal.
    """
    rng = np.random.default_rng(seed)
    span = float(np.ptp(nus))
    top, bottom = float(np.max(sum_ys)), float(np.min(sum_ys))
    ratio = bottom / top if top > 0 else 1.0
    r_v = math.sqrt(max(ratio / (2.0 - ratio), 0.0))
    k0 = min(0.5 * (1.0 + r_v), 0.99)
    amp0 = max(2.0 * top / (1.0 + r_v**2), 1e-12)
    below = nus[sum_ys < 0.5 * (top + bottom)]
    kappa0 = float(np.ptp(below)) if below.size > 1 else span / 10
    kappa0 = max(kappa0, 1e-3 * span)

    fsrs = span / np.geomspace(1.0, 0.5 * nus.size / 4, 60)
    phases = np.linspace(0.0, 2 * math.pi, 24, endpoint=False)
    scores = []
    for fsr in fsrs:
        for ph in phases:
            _, diff = spectrum_signals(fsr, two_pi_ghz(k0 * kappa0),
                                       two_pi_ghz((1 - k0) * kappa0), amp0,
                                       ph, nus)
            scores.append((float(np.sum((diff - diff_ys)**2)), fsr, ph))
    scores.sort()
    starts = []
    for i in range(n_starts):
        _, fsr, ph = scores[min(i // 2, len(scores) - 1)]
        jitter = np.exp(rng.normal(0.0, 0.1, size=2)) if i else np.ones(2)
        kap = kappa0 * jitter[0]
        frac = min(k0 * jitter[1], 0.99)
        starts.append(np.array([fsr, frac * kap, (1 - frac) * kap, ph, amp0]))
    return starts
