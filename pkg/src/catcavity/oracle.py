"""Brute-force master-equation oracle in a truncated atom x field basis.

The density matrix lives on basis states |n, s> with s in {+, -}, index
2 n + (0 for +, 1 for -).  Integration happens in the interaction picture
that removes omega (a* a + sigma_z / 2): at resonance the remaining
Hamiltonian is the bare coupling g (a sigma_+ + a* sigma_-), so step sizes
are set by g and kappa only and the (unspecified) optical frequency cancels
from every observable.  The Liouvillian is assembled once as a sparse
matrix acting on the row-major vectorization of rho.

The dressed-frame helpers rotate trajectories into W(t) = e^{iHt} rho e^{-iHt}
(up to the common free phase), where only damping drives the dynamics; the
appendix equations of motion can then be checked as residuals against the
ladder-coefficient transcription from `dressed`.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp

from .damping import rate_arrays
from .dressed import GROUND, apply_annihilation_dressed, build_dressed_frame
from .errors import (
    ConsistencyError,
    DegenerateCatError,
    StiffnessError,
    TruncationError,
    UnsupportedRegimeError,
)
from .states import MASS_TOLERANCE, CatSpec, PhotonDistribution

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class DensityMatrix:
    """Atom x field density operator, basis |n, s>, at a given time."""

    matrix: np.ndarray
    time: float
    truncation: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2 * (self.truncation + 1),) * 2:
            raise ValueError("matrix shape inconsistent with truncation")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def validate(self, trace_tol=1e-8, herm_tol=1e-10, eig_tol=1e-8):
        m = self.matrix
        if np.abs(m - m.conj().T).max() > herm_tol:
            raise ConsistencyError("density matrix not Hermitian")
        if abs(np.trace(m).real - 1.0) > trace_tol:
            raise ConsistencyError("density matrix trace drifted")
        if np.linalg.eigvalsh(m).min() < -eig_tol:
            raise ConsistencyError("density matrix not positive")


@dataclass(frozen=True)
class WFrameMatrix:
    """W(t) in the dressed basis (ordering of `dressed_basis`)."""

    matrix: np.ndarray
    time: float
    truncation: int


# ---------------------------------------------------------------------------
# state construction
# ---------------------------------------------------------------------------

def coherent_state_vector(intensity, truncation):
    """Fock amplitudes of |z> with z = sqrt(intensity) (real)."""
    n = np.arange(truncation + 1)
    from scipy.special import gammaln

    if intensity == 0.0:
        amp = np.zeros(truncation + 1)
        amp[0] = 1.0
        return amp.astype(complex)
    log_amp = 0.5 * (n * math.log(intensity) - intensity - gammaln(n + 1.0))
    return np.exp(log_amp).astype(complex)


def cat_state_vector(spec, truncation):
    """Fock amplitudes of the normalized cat |z; phi>, coherences included."""
    if spec.is_degenerate:
        raise DegenerateCatError("cannot build a state vector for a null cat")
    base = coherent_state_vector(spec.intensity, truncation)
    signs = (-1.0) ** np.arange(truncation + 1)
    amp = (base + np.exp(1j * spec.phase) * base * signs) / math.sqrt(
        spec.normalization
    )
    norm = np.vdot(amp, amp).real
    if norm < 1.0 - MASS_TOLERANCE:
        raise TruncationError(
            f"cat state retains norm {norm:.15f} at truncation {truncation}"
        )
    return amp


def build_initial_state(fieldspec, truncation):
    """rho(0) = (field state) x |+><+| with the atom excited.

    `fieldspec` may be a CatSpec (pure cat, Fock coherences kept), a complex
    amplitude vector (any pure field state), or a PhotonDistribution
    (diagonal mixture -- what the analytic path sees).
    """
    dim = 2 * (truncation + 1)
    if isinstance(fieldspec, CatSpec):
        amp = cat_state_vector(fieldspec, truncation)
        rho_c = np.outer(amp, amp.conj())
    elif isinstance(fieldspec, PhotonDistribution):
        if fieldspec.truncation != truncation:
            raise ValueError("distribution truncation mismatch")
        rho_c = np.diag(fieldspec.probs.astype(complex))
    else:
        amp = np.asarray(fieldspec, dtype=complex)
        if amp.size != truncation + 1:
            raise ValueError("amplitude vector length mismatch")
        rho_c = np.outer(amp, amp.conj())
    excited = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    rho = np.kron(rho_c, excited)
    assert rho.shape == (dim, dim)
    return DensityMatrix(matrix=rho, time=0.0, truncation=truncation)


# ---------------------------------------------------------------------------
# Liouvillian and integration
# ---------------------------------------------------------------------------

def _field_annihilation(truncation):
    return np.diag(np.sqrt(np.arange(1, truncation + 1)), 1)


def _left(op):
    """Superoperator for op @ rho under row-major vectorization."""
    dim = op.shape[0]
    return sp.kron(sp.csr_matrix(op), sp.identity(dim, format="csr"), format="csr")


def _right(op):
    """Superoperator for rho @ op under row-major vectorization."""
    dim = op.shape[0]
    return sp.kron(sp.identity(dim, format="csr"), sp.csr_matrix(op.T), format="csr")


def liouvillian(jc, damping, truncation, include_coupling=True):
    """Sparse interaction-picture Liouvillian on vec(rho).

    drho/dt = i [rho, H'] - kappa (n_b+1) (a*a rho + rho a*a - 2 a rho a*)
                          - kappa n_b   (a a* rho + rho a a* - 2 a* rho a)

    with H' = (detuning/2) sigma_z + g (a sigma_+ + a* sigma_-).  Setting
    include_coupling=False drops H' entirely (field-only decay; used for
    pure-decoherence runs).  damping=None runs the undamped limit, which
    DampingParams itself excludes.
    """
    a_f = _field_annihilation(truncation)
    eye_f = np.eye(truncation + 1)
    sigma_p = np.array([[0.0, 1.0], [0.0, 0.0]])
    sigma_m = sigma_p.T
    sigma_z = np.diag([1.0, -1.0])

    a = np.kron(a_f, np.eye(2))
    ad = a.conj().T

    lind = sp.csr_matrix((4 * (truncation + 1) ** 2,) * 2, dtype=complex)
    if include_coupling:
        h = jc.g * (np.kron(a_f, sigma_p) + np.kron(a_f.conj().T, sigma_m))
        h = h + 0.5 * jc.detuning * np.kron(eye_f, sigma_z)
        lind = lind + 1j * (_right(h) - _left(h))

    if damping is None:
        return lind.tocsr()
    k, nb = damping.kappa, damping.n_thermal
    ada = ad @ a
    aad = a @ ad
    lind = lind - k * (nb + 1.0) * (_left(ada) + _right(ada) - 2.0 * _left(a) @ _right(ad))
    if nb > 0:
        lind = lind - k * nb * (_left(aad) + _right(aad) - 2.0 * _left(ad) @ _right(a))
    return lind.tocsr()


def integrate_trajectory(rho0, jc, damping, times, tol=DEFAULT_TOL,
                         include_coupling=True):
    """Integrate the master equation, returning DensityMatrix at each time.

    Adaptive explicit Runge-Kutta (DOP853) with relative tolerance `tol`;
    trace drift beyond 10*tol raises.
    """
    times = np.asarray(times, dtype=float)
    if times[0] < 0 or np.any(np.diff(times) < 0):
        raise ValueError("times must be non-negative and non-decreasing")
    lind = liouvillian(jc, damping, rho0.truncation,
                       include_coupling=include_coupling)
    y0 = rho0.matrix.reshape(-1)
    first = 0
    out = []
    if times[0] == rho0.time:
        out.append(rho0)
        first = 1
    if first == len(times):
        return out
    sol = solve_ivp(
        lambda _t, v: lind @ v,
        (rho0.time, times[-1]),
        y0,
        method="DOP853",
        rtol=tol,
        atol=tol * 1e-3,
        t_eval=times[first:],
    )
    if not sol.success:
        raise StiffnessError(
            f"integrator failed: {sol.message}; try a larger tol"
        )
    dim = 2 * (rho0.truncation + 1)
    for idx, t in enumerate(times[first:]):
        m = sol.y[:, idx].reshape(dim, dim)
        trace = np.trace(m).real
        if abs(trace - np.trace(rho0.matrix).real) > 10.0 * tol:
            raise ConsistencyError(f"trace drift {trace - 1.0:.3e} beyond 10*tol")
        out.append(DensityMatrix(matrix=m, time=float(t),
                                 truncation=rho0.truncation))
    return out


def integrate(rho0, jc, damping, t, tol=DEFAULT_TOL):
    """Single-time convenience wrapper around integrate_trajectory."""
    return integrate_trajectory(rho0, jc, damping, [rho0.time, t], tol=tol)[-1]


# ---------------------------------------------------------------------------
# dressed frame
# ---------------------------------------------------------------------------

def ground_index():
    return 0


def plus_index(n):
    return 1 + 2 * n


def minus_index(n):
    return 2 + 2 * n


def edge_index(truncation):
    """Index of the unpaired top state |N, +> left over by the truncation."""
    return 2 * truncation + 1


def dressed_basis(truncation):
    """(U, rabi) with dressed states as columns of U (resonant, theta = pi/4).

    Column order: |psi_0>=|0,->, then (psi_n^+, psi_n^-) for n = 0..N-1, then
    the truncation edge state |N, +>.  `rabi` holds the interaction-picture
    eigenvalue of each column in units of g: 0, +-sqrt(n+1), 0.
    """
    dim = 2 * (truncation + 1)
    u = np.zeros((dim, dim))
    rabi = np.zeros(dim)
    u[2 * 0 + 1, ground_index()] = 1.0  # |0, ->
    r = 1.0 / math.sqrt(2.0)
    for n in range(truncation):
        bare_minus = 2 * (n + 1) + 1  # |n+1, ->
        bare_plus = 2 * n             # |n, +>
        u[bare_minus, plus_index(n)] = r
        u[bare_plus, plus_index(n)] = r
        u[bare_minus, minus_index(n)] = -r
        u[bare_plus, minus_index(n)] = r
        rabi[plus_index(n)] = math.sqrt(n + 1.0)
        rabi[minus_index(n)] = -math.sqrt(n + 1.0)
    u[2 * truncation, edge_index(truncation)] = 1.0  # |N, +>
    return u, rabi


def to_w_frame(rho, frame, t=None):
    """Rotate rho(t) into the dressed-basis W frame.

    At resonance W(t) = e^{iHt} rho(t) e^{-iHt} reduces, in the interaction
    picture, to conjugation by the diagonal phases e^{i g sqrt(n+1) t} of the
    coupling Hamiltonian.
    """
    if frame.params.detuning != 0.0:
        raise UnsupportedRegimeError("W frame defined at resonance only")
    if t is None:
        t = rho.time
    u, rabi = dressed_basis(rho.truncation)
    lam = frame.params.g * rabi
    dressed = u.T @ rho.matrix @ u
    phases = np.exp(1j * lam * t)
    w = phases[:, None] * dressed * phases.conj()[None, :]
    return WFrameMatrix(matrix=w, time=float(t), truncation=rho.truncation)


def dressed_annihilation(frame, truncation):
    """Matrix of a in the dressed basis, built from the ladder coefficients.

    Bulk columns come from the resonant relations of `dressed`; the two
    truncation-edge cases (the unpaired |N, +> and the absent level N
    doublet) are filled from the bare action.
    """
    dim = 2 * (truncation + 1)
    a_d = np.zeros((dim, dim))

    def row_of(term):
        if term.branch == GROUND:
            return ground_index()
        return plus_index(term.level) if term.branch == "+" else minus_index(term.level)

    for n in range(truncation):
        for branch, col in (("+", plus_index(n)), ("-", minus_index(n))):
            for term in apply_annihilation_dressed(frame, branch, n):
                a_d[row_of(term), col] = term.coefficient
    # a |N, +> = sqrt(N) |N-1, +> = sqrt(N/2) (|psi_{N-1}^+> + |psi_{N-1}^->)
    root = math.sqrt(truncation / 2.0)
    a_d[plus_index(truncation - 1), edge_index(truncation)] = root
    a_d[minus_index(truncation - 1), edge_index(truncation)] = root
    return a_d


# ---------------------------------------------------------------------------
# observable extraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OracleObservables:
    """Like-for-like quantities extracted from an oracle trajectory.

    f covers the dressed doublets n = 0..truncation-1 present in the
    truncated space.
    """

    times: np.ndarray
    p_plus: np.ndarray
    field_diag: np.ndarray
    f: np.ndarray
    f_ground: np.ndarray
    offdiag: np.ndarray


def oracle_observables(trajectory, frame):
    """Extract P_+, p_n, dressed F_n, F_{-1} and off-diagonals per sample."""
    trunc = trajectory[0].truncation
    times = np.array([r.time for r in trajectory])
    p_plus = np.empty(times.size)
    field_diag = np.empty((times.size, trunc + 1))
    f = np.empty((times.size, trunc))
    f_ground = np.empty(times.size)
    offd = np.empty((times.size, trunc), dtype=complex)
    plus_rows = np.array([plus_index(n) for n in range(trunc)])
    minus_rows = np.array([minus_index(n) for n in range(trunc)])
    for i, rho in enumerate(trajectory):
        m = rho.matrix
        diag = np.diag(m).real
        p_plus[i] = diag[0::2].sum()
        field_diag[i] = diag[0::2] + diag[1::2]
        w = to_w_frame(rho, frame).matrix
        f[i] = w[plus_rows, plus_rows].real + w[minus_rows, minus_rows].real
        f_ground[i] = 2.0 * w[ground_index(), ground_index()].real
        offd[i] = w[plus_rows, minus_rows]
    return OracleObservables(times=times, p_plus=p_plus, field_diag=field_diag,
                             f=f, f_ground=f_ground, offdiag=offd)


def condition_on_atom(rho, outcome):
    """Unnormalized field matrix <s|rho|s> and its weight after detection."""
    s = 0 if outcome == "+" else 1
    block = rho.matrix[s::2, s::2]
    return block, float(np.trace(block).real)


def reinject_excited(field_matrix, truncation, time):
    """Re-tensor a fresh excited atom onto an (unnormalized) field matrix."""
    excited = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    return DensityMatrix(matrix=np.kron(field_matrix, excited), time=time,
                         truncation=truncation)


def joint_probability_oracle(rho0, jc, damping, t_a, t_b, s1, s2,
                             tol=DEFAULT_TOL):
    """Two-atom joint probability by explicit sequential integration.

    Atom 1 evolves with the field to t_A and is projected onto s1 (keeping
    the unnormalized weight); a fresh excited atom then evolves with the
    conditioned field to t_B, where s2 is read off.
    """
    rho_a = integrate(rho0, jc, damping, t_a, tol=tol)
    field, weight = condition_on_atom(rho_a, s1)
    if weight <= 0.0:
        return 0.0
    rho_b0 = reinject_excited(field, rho0.truncation, rho_a.time)
    rho_b = integrate(rho_b0, jc, damping, t_b, tol=tol)
    _, joint = condition_on_atom(rho_b, s2)
    return joint


# ---------------------------------------------------------------------------
# appendix equation residuals
# ---------------------------------------------------------------------------

def w_equation_residuals(trajectory, frame, damping, dt):
    """Residuals of the dressed-frame equations of motion along a W trajectory.

    `trajectory` is a list of WFrameMatrix sampled at uniform spacing dt with
    dt * g < 0.1.  Time derivatives use a fourth-order centered stencil, so
    residuals exist at interior samples 2..len-3.  The right-hand side is the
    dissipator conjugated into the rotating dressed frame, assembled from the
    ladder-coefficient matrix of `dressed_annihilation` and the explicit
    oscillatory phase factors; element families are reported separately:

      diag_bulk    diagonal doublet elements, n >= 1
      diag_ground  diagonal elements at n = 0 and the ground sector
      offdiag_bulk intra-doublet off-diagonals, n >= 1
      offdiag_n0   intra-doublet off-diagonal at n = 0

    Returns a dict with the max absolute residual per family and `w_norm`,
    the max absolute W element seen.
    """
    if len(trajectory) < 5:
        raise ValueError("need at least 5 uniformly spaced samples")
    trunc = trajectory[0].truncation
    g = frame.params.g
    if dt * g >= 0.1:
        raise ValueError("dt*g must be below 0.1 for the secular part")
    _, rabi = dressed_basis(trunc)
    lam = g * rabi
    a_base = dressed_annihilation(frame, trunc)
    k, nb = damping.kappa, damping.n_thermal

    plus_rows = np.array([plus_index(n) for n in range(trunc)])
    minus_rows = np.array([minus_index(n) for n in range(trunc)])
    report = {key: 0.0 for key in
              ("diag_bulk", "diag_ground", "offdiag_bulk", "offdiag_n0")}
    w_norm = 0.0
    for i in range(2, len(trajectory) - 2):
        t = trajectory[i].time
        w = trajectory[i].matrix
        w_norm = max(w_norm, np.abs(w).max())
        phases = np.exp(1j * lam * t)
        a_t = phases[:, None] * a_base * phases.conj()[None, :]
        a_t_dag = a_t.conj().T
        num_low = a_t_dag @ a_t
        rhs = -k * (nb + 1.0) * (num_low @ w + w @ num_low
                                 - 2.0 * a_t @ w @ a_t_dag)
        if nb > 0:
            num_high = a_t @ a_t_dag
            rhs = rhs - k * nb * (num_high @ w + w @ num_high
                                  - 2.0 * a_t_dag @ w @ a_t)
        wdot = (
            -trajectory[i + 2].matrix + 8.0 * trajectory[i + 1].matrix
            - 8.0 * trajectory[i - 1].matrix + trajectory[i - 2].matrix
        ) / (12.0 * dt)
        res = np.abs(wdot - rhs)
        report["diag_bulk"] = max(
            report["diag_bulk"],
            res[plus_rows[1:], plus_rows[1:]].max(),
            res[minus_rows[1:], minus_rows[1:]].max(),
        )
        report["diag_ground"] = max(
            report["diag_ground"],
            res[plus_rows[0], plus_rows[0]],
            res[minus_rows[0], minus_rows[0]],
            res[ground_index(), ground_index()],
        )
        report["offdiag_bulk"] = max(
            report["offdiag_bulk"], res[plus_rows[1:], minus_rows[1:]].max()
        )
        report["offdiag_n0"] = max(
            report["offdiag_n0"], res[plus_rows[0], minus_rows[0]]
        )
    report["w_norm"] = w_norm
    return report


def w_trajectory(rho0, jc, damping, center_times, dt, tol=1e-11):
    """Sample 5-point W-frame stencils around each center time.

    Returns a list of 5-sample W windows (one per center time), ready for
    `w_equation_residuals`.
    """
    frame = build_dressed_frame(jc, rho0.truncation)
    windows = []
    for tc in center_times:
        times = tc + dt * np.arange(-2.0, 3.0)
        if times[0] < 0:
            raise ValueError("stencil extends below t = 0")
        traj = integrate_trajectory(rho0, jc, damping, times, tol=tol)
        windows.append([to_w_frame(r, frame) for r in traj])
    return windows


# ---------------------------------------------------------------------------
# decoherence surrogate
# ---------------------------------------------------------------------------

def branch_coherence(rho_field, intensity, truncation, time, kappa):
    """|<z e^{-kappa t}| rho_C |-z e^{-kappa t}>| for a field density matrix.

    The probe coherent states follow the decaying branch amplitude so that
    plain energy decay does not masquerade as decoherence.
    """
    z2 = intensity * math.exp(-2.0 * kappa * time)
    probe = coherent_state_vector(z2, truncation)
    signs = (-1.0) ** np.arange(truncation + 1)
    return abs(np.vdot(probe, rho_field @ (probe * signs)))


def branch_coherence_trajectory(spec, damping, times, truncation,
                                tol=DEFAULT_TOL):
    """Cat branch coherence under pure cavity decay (coupling off).

    Runs the oracle master equation with the atom uncoupled, so the decay of
    the cross-branch overlap isolates environment-induced decoherence.
    """
    from .dressed import JCParams

    rho0 = build_initial_state(spec, truncation)
    traj = integrate_trajectory(rho0, JCParams(g=1.0), damping, times, tol=tol,
                                include_coupling=False)
    out = np.empty(len(traj))
    for i, rho in enumerate(traj):
        field = rho.matrix[0::2, 0::2] + rho.matrix[1::2, 1::2]
        out[i] = branch_coherence(field, spec.intensity, truncation, rho.time,
                                  damping.kappa)
    return out
