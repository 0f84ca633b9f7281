"""Count-based activity embeddings and similarity benchmarks for event logs."""

from .bench import TimingRecord, TimingReport, export_report, run_runtime_bench
from .contexts import (
    ContextKey,
    ContextKind,
    OccurrenceTable,
    extract_occurrences,
    render_context,
)
from .errors import (
    ActsimError,
    DataError,
    EmptyLogError,
    ExportError,
    FormatError,
    ParameterError,
)
from .groundtruth import (
    BenchmarkPlan,
    ClassAssignment,
    GroundTruthLog,
    PlanJob,
    enumerate_benchmark_plan,
    generate_ground_truth_log,
    mix_seed,
    splitmix64,
    write_classes_json,
)
from .intrinsic import (
    AggregateReport,
    AggregateRow,
    FailedJob,
    IntrinsicScores,
    aggregate_scores,
    run_intrinsic_benchmark,
    score_all,
    score_compactness,
    score_nearest_neighbor,
    score_precision_at_k,
    score_triplet,
)
from .log import (
    PAD,
    PAD_LABEL,
    Alphabet,
    EventLog,
    LogStats,
    compute_stats,
    log_from_label_traces,
    parse_csv,
    parse_xes,
    read_log,
    write_log_csv,
    write_stats_csv,
)
from .matrices import (
    EmbeddingMatrix,
    Provenance,
    build_aa,
    build_ac,
    dimension_bound,
    write_embedding_csv,
)
from .pipeline import (
    METHODS,
    MethodConfig,
    build_embedding,
    expand_grid,
    make_config,
    similarity_for_config,
)
from .similarity import (
    PairwiseSimilarity,
    cosine_distance,
    pairwise_distance_matrix,
    substitution_scores,
    write_distance_csv,
)
from .weighting import WEIGHTINGS, apply_pmi, apply_ppmi, apply_weighting

__version__ = "0.1.0"

__all__ = [
    "ActsimError",
    "AggregateReport",
    "AggregateRow",
    "Alphabet",
    "BenchmarkPlan",
    "ClassAssignment",
    "ContextKey",
    "ContextKind",
    "DataError",
    "EmbeddingMatrix",
    "EmptyLogError",
    "EventLog",
    "ExportError",
    "FailedJob",
    "FormatError",
    "GroundTruthLog",
    "IntrinsicScores",
    "LogStats",
    "METHODS",
    "MethodConfig",
    "OccurrenceTable",
    "PAD",
    "PAD_LABEL",
    "PairwiseSimilarity",
    "ParameterError",
    "PlanJob",
    "Provenance",
    "TimingRecord",
    "TimingReport",
    "WEIGHTINGS",
    "aggregate_scores",
    "apply_pmi",
    "apply_ppmi",
    "apply_weighting",
    "build_aa",
    "build_ac",
    "build_embedding",
    "compute_stats",
    "cosine_distance",
    "dimension_bound",
    "enumerate_benchmark_plan",
    "expand_grid",
    "export_report",
    "extract_occurrences",
    "generate_ground_truth_log",
    "log_from_label_traces",
    "make_config",
    "mix_seed",
    "pairwise_distance_matrix",
    "parse_csv",
    "parse_xes",
    "read_log",
    "render_context",
    "run_intrinsic_benchmark",
    "run_runtime_bench",
    "score_all",
    "score_compactness",
    "score_nearest_neighbor",
    "score_precision_at_k",
    "score_triplet",
    "similarity_for_config",
    "splitmix64",
    "substitution_scores",
    "write_classes_json",
    "write_distance_csv",
    "write_embedding_csv",
    "write_log_csv",
    "write_stats_csv",
]
