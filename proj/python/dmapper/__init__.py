"""Mapper graphs with Gaussian-mixture quantile covers."""

import json

from . import _core
from ._core import (
    ConfigError,
    DataError,
    NumericError,
    alpha_upper_bound,
    bottleneck,
    extended_diagram,
    kmer_distance,
    quantile_cover,
    two_circles,
)

__all__ = [
    "ConfigError",
    "DataError",
    "NumericError",
    "alpha_upper_bound",
    "bottleneck",
    "evaluate",
    "extended_diagram",
    "fit_gmm",
    "kmer_distance",
    "quantile_cover",
    "run_mapper",
    "two_circles",
]


def fit_gmm(values, n, **kwargs):
    """Fitted mixture as a dict with weights, means and stddevs (sorted by mean)."""
    return json.loads(_core.fit_gmm(values, n, **kwargs))


def run_mapper(data, filter, **kwargs):
    """Graph dict: nodes, edges, cover, uncovered."""
    return json.loads(_core.run_mapper(data, filter, **kwargs))


def evaluate(data, filter, **kwargs):
    """Report dict with sc, sc_norm, tsr, sc_adj, d_eps and the diagram."""
    return json.loads(_core.evaluate(data, filter, **kwargs))
