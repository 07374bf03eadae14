"""Global and local spatial autocorrelation statistics, three ways.

The package computes Moran's I and Geary's C over distance-derived weight
matrices, decomposes them into per-unit local indicators in the three
formulations that circulate in the literature, and mechanically verifies
the exact identities tying the formulations together, including a
refutation audit of two widely repeated but false aggregation claims for
the row-normalized variant.
"""

from .errors import (
    AsymmetricDistance,
    CsvFormatError,
    DimensionMismatch,
    EmptyRow,
    LabelMismatch,
    LisaKitError,
    NonPositiveOffDiagonal,
    NonZeroDiagonal,
    ValidationError,
    WrongNormalization,
    ZeroRange,
    ZeroSum,
    ZeroVariance,
)
from .matrices import (
    ContiguityMatrix,
    DistanceMatrix,
    Kernel,
    Normalization,
    WeightMatrix,
    build_contiguity,
    normalize_global,
    normalize_row,
)
from .variables import (
    AttributeVector,
    TransformSet,
    global_normalize_vector,
    range_normalize,
    transform,
)
from .global_stats import (
    GlobalStats,
    compute_global_stats,
    expected_values,
    global_geary,
    global_moran,
    moran_geary_identity,
)
from .lisa import (
    LisaTable,
    compute_lisa_table,
    local_geary,
    local_geary_from_moran,
    local_geary_raw,
    local_geary_row,
    local_moran,
    local_moran_raw,
    local_moran_row,
    ratios,
)
from .verification import (
    Dataset,
    IdentityCheck,
    ScalarContext,
    VerificationReport,
    random_instance,
    run_identity_suite,
    run_refutation_audit,
)
from .datasets import bth_dataset, export_bth_csv, load_bth
from .plotting import OriginFit, ScatterData, build_scatter, fit_through_origin

__version__ = "0.1.0"

__all__ = [
    "AsymmetricDistance",
    "AttributeVector",
    "ContiguityMatrix",
    "CsvFormatError",
    "Dataset",
    "DimensionMismatch",
    "DistanceMatrix",
    "EmptyRow",
    "GlobalStats",
    "IdentityCheck",
    "Kernel",
    "LabelMismatch",
    "LisaKitError",
    "LisaTable",
    "NonPositiveOffDiagonal",
    "NonZeroDiagonal",
    "Normalization",
    "OriginFit",
    "ScalarContext",
    "ScatterData",
    "TransformSet",
    "ValidationError",
    "VerificationReport",
    "WeightMatrix",
    "WrongNormalization",
    "ZeroRange",
    "ZeroSum",
    "ZeroVariance",
    "bth_dataset",
    "build_contiguity",
    "build_scatter",
    "compute_global_stats",
    "compute_lisa_table",
    "expected_values",
    "export_bth_csv",
    "fit_through_origin",
    "global_geary",
    "global_moran",
    "global_normalize_vector",
    "load_bth",
    "local_geary",
    "local_geary_from_moran",
    "local_geary_raw",
    "local_geary_row",
    "local_moran",
    "local_moran_raw",
    "local_moran_row",
    "moran_geary_identity",
    "normalize_global",
    "normalize_row",
    "random_instance",
    "range_normalize",
    "ratios",
    "run_identity_suite",
    "run_refutation_audit",
    "transform",
]
