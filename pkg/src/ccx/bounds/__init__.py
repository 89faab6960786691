from .fieldmatrix import (
    P61,
    FieldMatrix,
    matrix_from_values,
    pif_matrix,
    rank_rational,
    weight_slice_matrix,
)
from .logrank import LogRankBound, logrank_embedding_bound, verify_embedding
from .paturi import fkl_predicate, fkl_vector, paturi_gamma, transitions
from .pattern import check_pattern_submatrix, pattern_dimensions, pattern_matrix
from .reduction import (
    Certificate,
    ReductionStep,
    esetinc_lower_certificate,
    reduction_transform,
)
from .report import report_bounds

__all__ = [
    "P61",
    "FieldMatrix",
    "matrix_from_values",
    "pif_matrix",
    "rank_rational",
    "weight_slice_matrix",
    "LogRankBound",
    "logrank_embedding_bound",
    "verify_embedding",
    "fkl_predicate",
    "fkl_vector",
    "paturi_gamma",
    "transitions",
    "check_pattern_submatrix",
    "pattern_dimensions",
    "pattern_matrix",
    "Certificate",
    "ReductionStep",
    "esetinc_lower_certificate",
    "reduction_transform",
    "report_bounds",
]
