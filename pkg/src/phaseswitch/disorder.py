"""Averaging over a Gaussian spread of atomic transition frequencies.

Light shifts from the trap move the atomic resonance by a random amount
that is quasi-static on the scale of the excited-state dynamics but fast
compared with photon-counting windows.  Singles rates therefore average with
weight ``I(delta)`` and coincidence rates with ``I(delta)^2 g2(delta)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import roots_hermitenorm

from .traces import TraceSeries


@dataclass(frozen=True)
class DetuningDistribution:
    """Zero-mean Gaussian of standard deviation ``sigma_delta`` (rad/us)
    sampled with ``n_nodes`` Gauss-Hermite nodes.

    The Lorentzian responses averaged here are often narrower than the
    spread, so the default node count is large.
    """

    sigma_delta: float
    n_nodes: int = 201

    def __post_init__(self):
        if self.sigma_delta < 0:
            raise ValueError("sigma_delta must be non-negative")
        if self.n_nodes < 3 or self.n_nodes % 2 == 0:
            raise ValueError("n_nodes must be odd and at least 3")

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Detuning offsets and normalized weights."""
        if self.sigma_delta == 0:
            return np.zeros(1), np.ones(1)
        x, w = roots_hermitenorm(self.n_nodes)
        x[self.n_nodes // 2] = 0.0  # exact centre node
        return self.sigma_delta * x, w / w.sum()


def average_intensity(f: Callable[[float], float],
                      dist: DetuningDistribution):
    """Gaussian average of ``f(delta)``; ``f`` may return arrays."""
    deltas, weights = dist.nodes()
    values = [np.asarray(f(d)) for d in deltas]
    out = sum(w * v for w, v in zip(weights, values))
    return out[()] if np.ndim(out) == 0 else out


def average_g2(g2_fn: Callable[[float], TraceSeries],
               i_fn: Callable[[float], float],
               dist: DetuningDistribution) -> TraceSeries:
    """``<I^2 g2(tau)> / <I>^2`` over the detuning distribution."""
    deltas, weights = dist.nodes()
    singles = 0.0
    coincidences = None
    first = None
    for d, w in zip(deltas, weights):
        trace = g2_fn(d)
        intensity = float(i_fn(d))
        if first is None:
            first = trace
        singles += w * intensity
        term = w * intensity**2 * np.asarray(trace.y, dtype=float)
        coincidences = term if coincidences is None else coincidences + term
    if singles < 1e-14:
        warnings.warn(f"averaged intensity {singles:.2e} is near zero",
                      RuntimeWarning, stacklevel=2)
    return TraceSeries(first.x, coincidences / singles**2,
                       tag=f"{first.tag} averaged", x_unit=first.x_unit,
                       y_unit=first.y_unit)
