"""Numerical toolkit for the resource theory of imaginarity.

Free states are real density matrices and free operations are channels with
real Kraus operators. The package provides the imaginarity measures, optimal
conversion and distillation protocols, local real discrimination of
orthogonal states and wave-plate cost accounting for optical realisations.
"""

from .canonical import CanonicalPureForm, GammaDecomposition, canonical_form, conjugate_overlap, gamma_decompose
from .channels import (
    KrausSet,
    RealKrausSet,
    apply,
    apply_outcomes,
    complete_set,
    random_channel,
    random_real_channel,
    validate_real,
)
from .config import DEFAULT, Config
from .conversion import (
    PureConversionPlan,
    accessible_boundary,
    distill,
    optimal_distillation_channel,
    pure_conversion_plan,
    pure_conversion_probability,
    qubit_accessible_region,
    qubit_deterministic_convertible,
    qubit_mixing_channel,
    region_grid,
    yz_boundary_channel,
)
from .discrimination import DiscriminationProtocol, correlation_matrix, simulate_protocol, synthesize_protocol
from .errors import ImaginarityError
from .linalg import (
    PLUS_I,
    AntisymBlockForm,
    BlochVector,
    PureState,
    QuantumState,
    antisym_block_diagonalize,
    fidelity,
    random_orthogonal,
    random_pure,
    random_real_pure,
    random_real_state,
    random_state,
    random_unitary,
    validate_pure,
    validate_state,
)
from .measures import (
    conversion_probability_bound,
    discrimination_advantage_ratio,
    fidelity_of_imaginarity,
    geometric_imaginarity_pure,
    measure_report,
    robustness,
)
from .optics import CostReport, decompose_orthogonal, dilation_cost, measurement_cost
from .rotations import RotationPlan

__version__ = "0.1.0"
