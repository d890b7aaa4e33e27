"""Distributed coding of a function of two correlated finite-alphabet sources.

Random-binning encoders with a unique-typical-output decoder, exact rate
regions from entropy thresholds, weak-typicality enumeration, and a seeded
Monte Carlo harness for error-probability experiments.
"""

from .codec import (
    E0_NO_CANDIDATE,
    E1_X_CONFUSION,
    E2_Y_CONFUSION,
    E12_JOINT_CONFUSION,
    BinningCode,
    DecodeOutcome,
    EncodedMessage,
    build_code,
    classify_error,
    decode,
    decoder_tables,
    encode,
)
from .errors import BudgetError, DocumentError
from .harness import (
    CSV_COLUMNS,
    CellReport,
    ExperimentPlan,
    FanoDiagnostic,
    SweepResult,
    exact_error_probability,
    fano,
    load_plan,
    report_regions,
    run_cell,
    run_sweep,
    trial_rng,
    wilson_interval,
)
from .measures import EntropyReport, conditional_entropy, entropy, full_report
from .region import (
    FUNCTION,
    SLEPIAN_WOLF,
    RateRegion,
    boundary_points,
    containment,
    contains,
    corner_points,
    region_of,
)
from .source import (
    FunctionSpec,
    JointSource,
    SequencePair,
    apply_function,
    induced_z_pmf,
    load_source,
    load_source_path,
    marginals,
    sample,
)
from .typicality import (
    DEFAULT_BUDGET,
    TypicalityParams,
    TypicalSetSummary,
    cardinality_bound,
    conditional_typical_count,
    enumerate_typical,
    is_jointly_typical,
    is_typical,
)

__all__ = [
    "BinningCode", "BudgetError", "CSV_COLUMNS", "CellReport", "DecodeOutcome",
    "DocumentError", "E0_NO_CANDIDATE", "E12_JOINT_CONFUSION", "E1_X_CONFUSION",
    "E2_Y_CONFUSION", "EncodedMessage", "EntropyReport", "ExperimentPlan",
    "FUNCTION", "FanoDiagnostic", "FunctionSpec", "JointSource", "RateRegion",
    "SLEPIAN_WOLF", "SequencePair", "SweepResult", "TypicalSetSummary",
    "TypicalityParams", "DEFAULT_BUDGET", "apply_function", "boundary_points",
    "build_code", "cardinality_bound", "classify_error", "conditional_entropy",
    "conditional_typical_count", "containment", "contains", "corner_points",
    "decode", "decoder_tables", "encode", "entropy", "enumerate_typical",
    "exact_error_probability", "fano", "full_report", "induced_z_pmf",
    "is_jointly_typical", "is_typical", "load_plan", "load_source",
    "load_source_path", "marginals", "region_of", "report_regions", "run_cell",
    "run_sweep", "sample", "trial_rng", "wilson_interval",
]
