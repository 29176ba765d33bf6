"""scikit-learn wrappers over the functional core.

Samples are maximal independent sets of B(2d-1, d), given either as int
bitmasks or as a 0/1 matrix with one column per vertex (global order).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .errors import InvalidParameter, NotIndependent
from .layer_graph import LayerGraph, middle_layer_graph
from .matching_assign import classify_typical, direction_profile, is_typical_in_direction

FEATURE_NAMES = ("size", "upper_size", "matching_size", "top_direction_share", "typical")


def check_middle_degree(d) -> int:
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InvalidParameter(f"d must be an integer >= 2, got {d!r}")
    return int(d)


def check_vertex_sets(X, num_vertices: int) -> list[int]:
    """Normalize ``X`` to a list of bitmasks, rejecting out-of-range vertices."""
    if isinstance(X, np.ndarray) and X.ndim == 2:
        if X.shape[1] != num_vertices:
            raise ValueError(f"expected {num_vertices} columns, got {X.shape[1]}")
        if not np.isin(X, (0, 1)).all():
            raise ValueError("indicator matrix must be 0/1")
        weights = [1 << v for v in range(num_vertices)]
        return [sum(w for w, b in zip(weights, row) if b) for row in X.tolist()]
    out = []
    for x in X:
        x = int(x)
        if x < 0 or x >> num_vertices:
            raise ValueError(f"bitmask {x:#x} has vertices outside the graph")
        out.append(x)
    if not out:
        raise ValueError("need at least one sample")
    return out


def check_independent_sets(g: LayerGraph, X) -> list[int]:
    masks = check_vertex_sets(X, g.num_vertices)
    for s in masks:
        if not g.is_independent(s):
            raise NotIndependent(f"sample {s:#x} is not independent")
    return masks


def to_indicator(g: LayerGraph, masks) -> np.ndarray:
    out = np.zeros((len(masks), g.num_vertices), dtype=np.uint8)
    for i, s in enumerate(masks):
        for v in range(g.num_vertices):
            out[i, v] = s >> v & 1
    return out


class MISFeaturizer(TransformerMixin, BaseEstimator):
    """Turn each maximal independent set into a row of structural features.

    Columns (see ``FEATURE_NAMES``): set size, upper-layer part, size of the
    assigned induced matching, share of that matching in its most common
    direction, and whether the set is typical for some direction.
    """

    def __init__(self, d: int = 3):
        self.d = d

    def fit(self, X, y=None):
        d = check_middle_degree(self.d)
        self.graph_ = middle_layer_graph(d)
        check_independent_sets(self.graph_, X)
        self.n_features_out_ = len(FEATURE_NAMES)
        return self

    def transform(self, X):
        check_is_fitted(self, "graph_")
        g = self.graph_
        rows = []
        for s in check_independent_sets(g, X):
            prof = direction_profile(g, s)
            top = max(prof.counts) if prof.matching_size else 0
            share = top / prof.matching_size if prof.matching_size else 0.0
            rows.append(
                [
                    s.bit_count(),
                    (s & g.upper_mask).bit_count(),
                    prof.matching_size,
                    share,
                    float(classify_typical(g, s) is not None),
                ]
            )
        return np.asarray(rows, dtype=float)

    def get_feature_names_out(self, input_features=None):
        return np.asarray(FEATURE_NAMES, dtype=object)


class TypicalStructureClassifier(ClassifierMixin, BaseEstimator):
    """Predict the smallest direction in which a set is typical (0 when none).

    There is nothing to learn: ``fit`` validates the input and records the
    label set so scoring against known directions works.
    """

    def __init__(self, d: int = 3):
        self.d = d

    def fit(self, X, y=None):
        d = check_middle_degree(self.d)
        self.graph_ = middle_layer_graph(d)
        check_independent_sets(self.graph_, X)
        self.classes_ = np.arange(0, self.graph_.n + 1)
        return self

    def predict(self, X):
        check_is_fitted(self, "graph_")
        g = self.graph_
        return np.asarray([classify_typical(g, s) or 0 for s in check_independent_sets(g, X)], dtype=int)

    def typical_in(self, X, directions) -> np.ndarray:
        """Per sample: is it typical in the given direction?"""
        check_is_fitted(self, "graph_")
        g = self.graph_
        masks = check_independent_sets(g, X)
        return np.asarray([is_typical_in_direction(g, s, int(k)) for s, k in zip(masks, directions)])
