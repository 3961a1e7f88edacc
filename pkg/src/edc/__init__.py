"""Codecs for Cantor sets on [0,1]: encode to compact self-delimiting
bitstrings, decode to finite point sets with certified Hausdorff distortion,
and measure how the bit cost grows as the precision target shrinks."""

from edc.bitstream import Description, DescriptionError
from edc.ckscaling import (
    CkCantor,
    DsMetric,
    PackingResult,
    ScalingParams,
    build_ck,
    ds_bracket,
    packing_estimate,
    separation_event,
    smoothness_k,
)
from edc.codecs import (
    decode,
    decode_rand_stream,
    encode_analytic,
    encode_ck,
    encode_poly,
    encode_rand_central,
    reference_intervals,
)
from edc.dimension import DimEstimate, box_count, estimate_dimension
from edc.experiments import (
    FitResult,
    SweepConfig,
    SweepRecord,
    fit,
    report,
    sweep,
)
from edc.ifs import (
    AffineMap,
    IfsSpec,
    LevelSet,
    PolynomialMap,
    SeriesMap,
    compose_apply,
    depth_for,
    geometric_series_pair,
    ifs_from_json,
    ifs_to_json,
    level_set,
    middle_third,
    quadratic_pair,
    validate,
)
from edc.numeric import (
    BudgetError,
    ContractError,
    FinitePointSet,
    HoleConfig,
    QuantizedReal,
    ValidationError,
    hausdorff_finite,
    hausdorff_vs_intervals,
    quantize,
    separation_test,
)
from edc.randcantor import (
    AuditResult,
    CentralLevels,
    LambdaStream,
    audit,
    build_central,
    gamma_of,
    separation_probe,
)
from edc.rng import TruncatedBeta, Uniform, parse_distribution

__all__ = [
    "AffineMap",
    "AuditResult",
    "BudgetError",
    "CentralLevels",
    "CkCantor",
    "ContractError",
    "Description",
    "DescriptionError",
    "DimEstimate",
    "DsMetric",
    "FinitePointSet",
    "FitResult",
    "HoleConfig",
    "IfsSpec",
    "LambdaStream",
    "LevelSet",
    "PackingResult",
    "PolynomialMap",
    "QuantizedReal",
    "ScalingParams",
    "SeriesMap",
    "SweepConfig",
    "SweepRecord",
    "TruncatedBeta",
    "Uniform",
    "ValidationError",
    "audit",
    "box_count",
    "build_central",
    "build_ck",
    "compose_apply",
    "decode",
    "decode_rand_stream",
    "depth_for",
    "ds_bracket",
    "encode_analytic",
    "encode_ck",
    "encode_poly",
    "encode_rand_central",
    "estimate_dimension",
    "fit",
    "gamma_of",
    "geometric_series_pair",
    "hausdorff_finite",
    "hausdorff_vs_intervals",
    "ifs_from_json",
    "ifs_to_json",
    "level_set",
    "middle_third",
    "packing_estimate",
    "parse_distribution",
    "quadratic_pair",
    "quantize",
    "reference_intervals",
    "report",
    "separation_event",
    "separation_probe",
    "separation_test",
    "smoothness_k",
    "sweep",
    "validate",
]

__version__ = "0.1.0"
