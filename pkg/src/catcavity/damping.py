"""Closed-form approximate solution of the damped field in the dressed frame.

Core objects are the dressed-diagonal sums F*_n(t), the ground-sector value
F*_{-1}(t) and the intra-doublet off-diagonal amplitudes.  F*_n is evaluated
directly from its closed form

    F*_n(t) = exp(-2 kappa t [(n + 1/2)(n_b + 1) + n_b])
              * sum_{j>=n} G(j+3/2)/G(n+3/2) x^{j-n}/(j-n)! p_j,

with x = 1 - exp(-2 kappa (n_b + 1) t) and all gamma-function ratios kept in
log space (every term is non-negative, so the sum is stable).  F*_{-1} comes
from unitarity, 2 (1 - sum_n F*_n); the alternating double-sum form is kept
only as a small-truncation cross-check because it loses ~15 digits near
N = 120.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import ConsistencyError, ValidityWarning
from .states import PhotonDistribution

#: Negative values of F*_n larger than this (in magnitude) are treated as bugs.
NEGATIVE_CLIP = 1e-12


@dataclass(frozen=True)
class DampingParams:
    """Cavity decay rate kappa (s^-1) and thermal occupation n_b."""

    kappa: float
    n_thermal: float = 0.0

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")
        if self.n_thermal < 0:
            raise ValueError("n_thermal must be non-negative")
        if self.n_thermal > 0.5:
            warnings.warn(
                "n_thermal > 0.5 is outside the small-n_b regime of the "
                "closed-form solution",
                ValidityWarning,
                stacklevel=2,
            )

    @property
    def t_cav(self):
        """Cavity field decay time 1/(2 kappa)."""
        return 1.0 / (2.0 * self.kappa)


@dataclass(frozen=True)
class DampedFieldState:
    """F*_n array, ground value F*_{-1} and off-diagonal amplitudes at one time."""

    f: np.ndarray
    f_ground: float
    offdiag: np.ndarray
    time: float

    def __post_init__(self):
        for name in ("f", "offdiag"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def rate_coefficients(damping, n):
    """Rates (alpha_n, beta_n, gamma_n) of the dressed-diagonal recurrence."""
    if n < -1:
        raise ValueError("n must be >= -1")
    k, nb = damping.kappa, damping.n_thermal
    if n == -1:
        return 2.0 * k * nb, 2.0 * k * (nb + 1.0), 0.0
    alpha = 2.0 * k * (2.0 * nb * (n + 1.0) + n + 0.5)
    beta = 2.0 * k * (nb + 1.0) * (n + 1.5)
    gamma = 2.0 * k * nb * (n + 0.5)
    return alpha, beta, gamma


def rate_arrays(damping, truncation):
    """(alpha, beta, gamma) arrays for n = 0..truncation."""
    n = np.arange(truncation + 1)
    k, nb = damping.kappa, damping.n_thermal
    alpha = 2.0 * k * (2.0 * nb * (n + 1.0) + n + 0.5)
    beta = 2.0 * k * (nb + 1.0) * (n + 1.5)
    gamma = 2.0 * k * nb * (n + 0.5)
    return alpha, beta, gamma


def _probs_of(p0):
    if isinstance(p0, PhotonDistribution):
        return p0.probs
    return np.asarray(p0, dtype=float)


def f_star(p0, damping, t):
    """Closed-form F*_n(t) for initial distribution p0 (may be unnormalized)."""
    probs = _probs_of(p0)
    if t < 0:
        raise ValueError("time must be non-negative")
    if t == 0.0:
        return probs.copy()
    k, nb = damping.kappa, damping.n_thermal
    n = np.arange(probs.size, dtype=float)
    x = -np.expm1(-2.0 * k * (nb + 1.0) * t)
    decay = np.exp(-2.0 * k * t * ((n + 0.5) * (nb + 1.0) + nb))
    jj = n[None, :]
    nn = n[:, None]
    diff = jj - nn
    log_x = math.log(x)
    log_terms = np.where(
        diff > 0,
        gammaln(jj + 1.5) - gammaln(nn + 1.5) + diff * log_x - gammaln(diff + 1.0),
        0.0,
    )
    kernel = np.where(diff >= 0, np.exp(log_terms), 0.0)
    out = decay * (kernel @ probs)
    bad = out < -NEGATIVE_CLIP
    if np.any(bad):
        raise ConsistencyError(
            f"F*_n went negative beyond roundoff: min {out.min():.3e}"
        )
    return np.clip(out, 0.0, None)


def f_star_ground(p0, damping, t):
    """F*_{-1}(t) from unitarity: 2 (1 - sum_n F*_n), clamped to [0, 2].

    For an unnormalized input the role of 1 is played by the input mass.
    """
    probs = _probs_of(p0)
    total = probs.sum()
    value = 2.0 * (total - f_star(probs, damping, t).sum())
    return min(max(value, 0.0), 2.0)


def f_star_ground_double_sum(p0, damping, t):
    """Explicit alternating double-sum form of F*_{-1}(t).

    Accurate only at small truncation (the inner sum cancels catastrophically
    for N beyond ~20); retained as an independent cross-check of the
    unitarity-based evaluation.
    """
    probs = _probs_of(p0)
    k, nb = damping.kappa, damping.n_thermal
    log_ghalf = gammaln(1.5)
    terms = []
    for j, pj in enumerate(probs):
        if pj == 0.0:
            continue
        for m in range(j + 1):
            log_mag = (
                gammaln(j + 1.5)
                - gammaln(j - m + 1.0)
                - gammaln(m + 1.0)
                - log_ghalf
                - k * (2.0 * m + 1.0) * (nb + 1.0) * t
                - math.log(m + 0.5)
            )
            terms.append((-1.0) ** m * math.exp(log_mag) * pj)
    return 2.0 - math.exp(-2.0 * k * nb * t) * math.fsum(terms)


def offdiag_decay(p0, damping, t):
    """Intra-doublet amplitudes <psi_n^+|W|psi_n^-> = (1/2) e^{-alpha_n t} p_n."""
    probs = _probs_of(p0)
    if t < 0:
        raise ValueError("time must be non-negative")
    alpha, _, _ = rate_arrays(damping, probs.size - 1)
    return 0.5 * np.exp(-alpha * t) * probs


def initial_state(p0):
    """DampedFieldState at t = 0 for initial distribution p0."""
    probs = _probs_of(p0)
    return DampedFieldState(f=probs.copy(), f_ground=0.0,
                            offdiag=0.5 * probs, time=0.0)


def evolve(state0, damping, t):
    """Propagate a t = 0 state to time t using the closed-form solution."""
    if state0.time != 0.0:
        raise ValueError("evolve expects a t = 0 initial state")
    probs = state0.f
    return DampedFieldState(
        f=f_star(probs, damping, t),
        f_ground=f_star_ground(probs, damping, t),
        offdiag=offdiag_decay(probs, damping, t),
        time=t,
    )


def residual_diagnostics(p0, damping, t, dt):
    """Finite-difference residuals of the F*_n recurrence and the F*_{-1} ODE.

    Returns (max_recurrence_residual, ground_ode_residual).  The recurrence
    residual includes the known model error gamma_n (F*_n - F*_{n-1}) on the
    right-hand side, so it measures only numerical error; both residuals
    vanish identically at n_b = 0.
    """
    probs = _probs_of(p0)
    alpha, beta, gamma = rate_arrays(damping, probs.size - 1)
    if dt <= 0 or t - dt < 0:
        raise ValueError("need 0 < dt <= t for centered differences")
    if dt * alpha.max() >= 1e-2:
        raise ValueError("dt too large for centered differences: dt*max(alpha) >= 1e-2")

    f_lo = f_star(probs, damping, t - dt)
    f_mid = f_star(probs, damping, t)
    f_hi = f_star(probs, damping, t + dt)
    g_lo = f_star_ground(probs, damping, t - dt)
    g_mid = f_star_ground(probs, damping, t)
    g_hi = f_star_ground(probs, damping, t + dt)

    fdot = (f_hi - f_lo) / (2.0 * dt)
    f_up = np.append(f_mid[1:], 0.0)  # F*_{N+1} = 0 closes the recurrence
    f_down = np.concatenate(([g_mid], f_mid[:-1]))
    residual = (
        fdot + alpha * f_mid - beta * f_up - gamma * f_down
        - gamma * (f_mid - f_down)
    )

    a_g, b_g, _ = rate_coefficients(damping, -1)
    gdot = (g_hi - g_lo) / (2.0 * dt)
    ground_residual = abs(
        gdot + a_g * g_mid - b_g * f_mid[0]
        - 4.0 * damping.kappa * damping.n_thermal
    )
    return float(np.abs(residual).max()), float(ground_residual)
