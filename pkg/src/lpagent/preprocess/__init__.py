from .pipeline import (
    PreprocessReport,
    RawProblem,
    extract_parameters,
    filter_clauses,
    load_raw_problem,
    preprocess,
    segment_clauses,
)

__all__ = [
    "PreprocessReport",
    "RawProblem",
    "extract_parameters",
    "filter_clauses",
    "load_raw_problem",
    "preprocess",
    "segment_clauses",
]
