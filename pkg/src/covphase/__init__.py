"""Covariant localization and phase observables on finite index windows."""
from .errors import InputError, ValidationError
from .torus_kernel import (
    Arc,
    ArcSet,
    haar_measure,
    kernel_integral,
    normalize_arcs,
    rotate,
    set_complement,
    set_difference,
    set_intersection,
    set_union,
)
from .phase_matrix import (
    IndexWindow,
    PhaseMatrix,
    Tolerances,
    ValidationReport,
    hermitian_eigen,
    principal_minor_check,
    restrict,
    validate,
)
from .gram_factor import VectorSequence, factorize_paper, factorize_spectral, gram, same_observable
from .observable import (
    EffectMatrix,
    StateVector,
    additivity_check,
    basis_state,
    covariance_check,
    density,
    effect_matrix,
    probability,
    sample,
    superposition,
)
from .analysis import (
    GaugePhases,
    check_commutative_criterion,
    check_equivalent,
    check_projection_valued,
    commutator_norm,
    cyclic_moment,
    first_phase_moment,
    pv_diagonal_test,
    pv_from_first_moment,
    second_phase_moment,
)
from .catalog import CatalogSpec, parity_matrix, pv_matrix, random_gram_matrix, trivial_phase_matrix

__version__ = "0.1.0"
