"""Revival probabilities, atom correlations and decoherence of a damped
cavity field prepared in a superposition of coherent states.

The closed-form path (states, dressed, damping, observables, resummation)
evaluates everything through the photon-number distribution and analytic
decay kernels; the oracle module integrates the full master equation in a
truncated basis and exists to cross-check the closed forms.
"""

from .damping import (
    DampedFieldState,
    DampingParams,
    evolve,
    f_star,
    f_star_ground,
    initial_state,
    offdiag_decay,
    rate_coefficients,
)
from .dressed import (
    DressedFrame,
    JCParams,
    apply_annihilation_dressed,
    apply_creation_dressed,
    build_dressed_frame,
)
from .errors import (
    CatCavityError,
    ConfigurationError,
    ConsistencyError,
    DegenerateCatError,
    StiffnessError,
    TruncationError,
    UnsupportedRegimeError,
    ValidityWarning,
)
from .observables import (
    ConditionedField,
    ExperimentConfig,
    conditioned_field,
    decoherence_time,
    eta_correlation,
    p_excited,
    p_joint,
)
from .presets import PRESETS, ExperimentPreset
from .resummation import ResumParams, resummed_p_excited
from .states import (
    CatSpec,
    PhotonDistribution,
    branch_overlap,
    cat_distribution,
    cat_mean_photons,
    coherent_distribution,
    default_truncation,
)

__all__ = [
    "CatCavityError",
    "CatSpec",
    "ConditionedField",
    "ConfigurationError",
    "ConsistencyError",
    "DampedFieldState",
    "DampingParams",
    "DegenerateCatError",
    "DressedFrame",
    "ExperimentConfig",
    "ExperimentPreset",
    "JCParams",
    "PRESETS",
    "PhotonDistribution",
    "ResumParams",
    "StiffnessError",
    "TruncationError",
    "UnsupportedRegimeError",
    "ValidityWarning",
    "apply_annihilation_dressed",
    "apply_creation_dressed",
    "branch_overlap",
    "build_dressed_frame",
    "cat_distribution",
    "cat_mean_photons",
    "coherent_distribution",
    "conditioned_field",
    "decoherence_time",
    "default_truncation",
    "eta_correlation",
    "evolve",
    "f_star",
    "f_star_ground",
    "initial_state",
    "offdiag_decay",
    "p_excited",
    "p_joint",
    "rate_coefficients",
    "resummed_p_excited",
]
