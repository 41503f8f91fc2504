"""zetaquant: diagonal Polya-Hilbert operators, regularized determinants, and
reconstruction of classical functions (rational, Gamma, xi, zeta, finite-field
curve zetas, finite-order entire functions) from their zeros."""

from .errors import (
    CertificationError,
    ConsistencyError,
    ConstructionError,
    DomainError,
    ParseError,
    PoleZeroError,
    RangeOverflowError,
    RecognitionError,
    ZetaquantError,
)
from .factors import (
    elementary_factor,
    ordered_compensated_sum,
    regdet_log_term,
    regdet_term,
)
from .opmodel import (
    DiagonalOperator,
    IdealClass,
    TailModel,
    ZeroMultiset,
    classify,
    diagonal_operator,
    eigen_multiplicity,
    from_zeros,
    operator_norm,
    spectrum,
)
from .regdet import (
    DenseMatrix,
    RegDetRequest,
    det_fredholm,
    det_p,
    det_trace_relation_check,
    exp_trace_identity_check,
    matrix_det_p,
    rn_matrix,
)

__version__ = "0.1.0"
