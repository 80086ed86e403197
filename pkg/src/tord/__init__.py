"""Numerical tools for measuring quantum time ordering in few-level systems."""

from .analyze import (
    CoherenceScale,
    OrderingReport,
    coherence_scale,
    commutator_score,
    composition_defect,
    initcond_check,
    ordering_report,
    reciprocity_check,
)
from .errors import ConvergenceError, TordError, UnsupportedError, UsageError, ValidationError
from .matcore import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    commutator,
    expm_hermitian_generator,
    frobenius_distance,
    unitarity_defect,
)
from .propagate import (
    GridSpec,
    PropagationResult,
    apply_kick,
    dyson_partial_sum,
    dyson_term,
    dyson_terms,
    evolve_backward,
    evolve_exact,
    evolve_unordered,
    second_order_split,
)
from .spectral import SpectralResult, bandwidth_product, eta_sweep, sign_transform, theta_transform
from .system import (
    BasisSpec,
    CouplingTerm,
    Envelope,
    KickSpec,
    SystemSpec,
    classify_degeneracy,
    pulse_area,
    v_interaction,
    v_schrodinger,
)

__version__ = "0.1.0"
