"""Cross-entropy search for feature subsets with maximal mutual information."""

import json as _json

from ._core import (  # noqa: F401
    CEConfig,
    Dataset,
    DiscretizedDataset,
    EmptyDataset,
    EmptyElite,
    EmptyTestSet,
    Error,
    ExtractPolicy,
    FileNotFound,
    InvalidArgument,
    LabelColumnMissing,
    LengthMismatch,
    ParseError,
    RankedSelection,
    SelectionResult,
    SingularCovariance,
    __version__,
    cli,
    conditional_entropy,
    conditional_mi,
    delta_ir,
    discretize,
    elite_threshold,
    entropy,
    fit_predict,
    joint_encode,
    load_csv,
    mce,
    mutual_information,
    rank_mim,
    run,
    score,
    select_cmim,
    select_disr,
    select_mrmr,
    split,
    update_probabilities,
)
from ._core import benchmark_json as _benchmark_json


def benchmark(dataset, methods=("ce", "mim", "cmim", "mrmr", "disr"),
              classifiers=("nb-pooled", "nb-diag", "knn"), config=None, **kwargs):
    """Run the held-out comparison and return the report as a dict."""
    cfg = config if config is not None else CEConfig()
    return _json.loads(_benchmark_json(dataset, list(methods), list(classifiers), cfg, **kwargs))
