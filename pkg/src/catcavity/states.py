"""Photon-number statistics of coherent and Schroedinger-cat field states.

A cat state is the normalized superposition (|z> + e^{i phi} |-z>) of two
coherent states.  Every downstream quantity depends only on the intensity
|z|^2 and the superposition phase phi, so the complex phase of z is never
stored.  All factorial ratios are evaluated through log-gamma so that
intensities of order 50 (Fock components out to n ~ 120) stay in range.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import DegenerateCatError, TruncationError

_TWO_PI = 2.0 * math.pi

#: Largest admissible probability-mass loss to the truncated upper tail.
MASS_TOLERANCE = 1e-10


def default_truncation(nbar):
    """Fock cutoff keeping at least 1 - 1e-10 of the photon mass at mean nbar."""
    return max(32, int(math.ceil(nbar + 10.0 * math.sqrt(nbar + 1.0))))


@dataclass(frozen=True)
class CatSpec:
    """Parameters of a Schroedinger-cat field state.

    intensity is |z|^2 (the mean-photon scale of each branch), phase is the
    superposition phase phi in radians, stored reduced to [0, 2*pi).
    """

    intensity: float
    phase: float = 0.0

    def __post_init__(self):
        if self.intensity < 0:
            raise ValueError("intensity must be non-negative")
        object.__setattr__(self, "phase", float(self.phase) % _TWO_PI)

    @property
    def normalization(self):
        """Squared norm 2 + 2 cos(phi) exp(-2|z|^2) of the unnormalized cat."""
        return 2.0 + 2.0 * math.cos(self.phase) * math.exp(-2.0 * self.intensity)

    @property
    def is_degenerate(self):
        return self.normalization <= 1e-12


@dataclass(frozen=True)
class PhotonDistribution:
    """Truncated photon-number distribution p_n over n = 0..truncation."""

    probs: np.ndarray
    truncation: int = field(default=-1)

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if self.truncation < 0:
            object.__setattr__(self, "truncation", probs.size - 1)
        if probs.size != self.truncation + 1:
            raise ValueError("probs must have truncation + 1 entries")
        if np.any(probs < 0.0) or np.any(probs > 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        total = probs.sum()
        if total < 1.0 - MASS_TOLERANCE:
            raise TruncationError(
                f"retained mass {total:.15f} below 1 - {MASS_TOLERANCE:g}; "
                "increase the truncation"
            )
        if total > 1.0 + 1e-12:
            raise ValueError("probabilities sum above 1")
        probs = probs.copy()
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    def mean(self):
        n = np.arange(self.truncation + 1)
        return float(n @ self.probs)


def _log_poisson(intensity, n):
    """log of the Poisson pmf with mean `intensity` at integer points n."""
    if intensity == 0.0:
        out = np.full(n.shape, -np.inf)
        out[n == 0] = 0.0
        return out
    return n * math.log(intensity) - intensity - gammaln(n + 1.0)


def coherent_distribution(intensity, truncation):
    """Photon distribution of a coherent state: Poisson with mean |z|^2."""
    if intensity < 0:
        raise ValueError("intensity must be non-negative")
    if truncation < 1:
        raise ValueError("truncation must be at least 1")
    n = np.arange(truncation + 1)
    probs = np.exp(_log_poisson(intensity, n))
    return PhotonDistribution(probs, truncation)


def cat_distribution(spec, truncation=None):
    """Photon distribution of the cat state |z; phi>.

    p_n is the Poisson pmf reweighted by the parity interference factor
    2 (1 + cos(phi) (-1)^n) / (2 + 2 cos(phi) exp(-2|z|^2)).  The cutoff
    defaults to `default_truncation` at the branch intensity.
    """
    if truncation is None:
        truncation = default_truncation(spec.intensity)
    if truncation < 1:
        raise ValueError("truncation must be at least 1")
    if spec.is_degenerate:
        raise DegenerateCatError(
            "cat normalization vanishes for this (intensity, phase)"
        )
    n = np.arange(truncation + 1)
    parity = 1.0 + math.cos(spec.phase) * (-1.0) ** n
    weights = 2.0 * parity / spec.normalization
    probs = np.exp(_log_poisson(spec.intensity, n)) * weights
    return PhotonDistribution(probs, truncation)


def cat_mean_photons(spec):
    """Mean photon number |z|^2 (1 - c)/(1 + c) with c = cos(phi) e^{-2|z|^2}.

    For phi = 0 this reduces to |z|^2 tanh(|z|^2).
    """
    if spec.is_degenerate:
        raise DegenerateCatError("mean photon number undefined for degenerate cat")
    c = math.cos(spec.phase) * math.exp(-2.0 * spec.intensity)
    return spec.intensity * (1.0 - c) / (1.0 + c)


def branch_overlap(intensity):
    """Overlap probability |<z|-z>|^2 = exp(-2 |z|^2) of the two branches."""
    if intensity < 0:
        raise ValueError("intensity must be non-negative")
    return math.exp(-2.0 * intensity)
