"""Separable decompositions of entangled pure states over non-quantum local state spaces."""

from .basis import (
    BasisKind,
    OperatorBasis,
    coefficients,
    gell_mann_basis,
    make_basis,
    matrix_unit_basis,
    phase_point_basis,
    positive_trace_basis,
    reconstruct,
    unit_trace_basis,
    verify_basis,
)
from .crossnorm import decomposition_cross_bound, gamma2_pure, product_size, schmidt_coefficients
from .decomposition import (
    SeparableDecomposition,
    diagnostics,
    equalize_norms,
    maxent_decomposition,
    pure_state_decomposition,
    verify,
)
from .duality import (
    GeneratorSet,
    MeasurementFamily,
    Povm,
    cone_membership,
    is_in_dual,
    measurement_compatible,
    pauli_family,
    unit_trace_extremality_probe,
)
from .errors import ConvergenceError, InputError, PreconditionError, UnsupportedDimensionError
from .lhv import LhvModel, lhv_from_decomposition, lhv_joint, lhv_sample, lhv_table, quantum_joint
from .linalg import (
    bloch_operator,
    frobenius_norm,
    hs_inner,
    maxent_state,
    negativity,
    tensor_product,
    trace_norm,
)

__version__ = "0.1.0"
