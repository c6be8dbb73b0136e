"""Fuzzy connectives and per-feature similarity kernels.

All connectives accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dataset import DecisionSystem


class TNorm(str, Enum):
    LUKASIEWICZ = "lukasiewicz"
    MINIMUM = "minimum"


class TConorm(str, Enum):
    LUKASIEWICZ = "lukasiewicz"
    MAXIMUM = "maximum"


class Kernel(str, Enum):
    RANGE_LINEAR = "range_linear"
    STDDEV_TRIANGULAR = "stddev_triangular"
    CRISP_EQUALITY = "crisp_equality"


def negation(x):
    return 1.0 - x


def lukasiewicz_implicator(x, y):
    return np.minimum(1.0 - x + y, 1.0)


@dataclass(frozen=True)
class Connectives:
    """A t-norm / t-conorm pair plus standard negation and Lukasiewicz implication.

    The default t-norm is the minimum: it is the one used when grading clause
    subsumption, and with it ``subsumption_degree == 1`` reduces to pointwise
    domination of membership vectors.
    """

    tnorm: TNorm = TNorm.MINIMUM
    tconorm: TConorm = TConorm.LUKASIEWICZ

    def __post_init__(self):
        object.__setattr__(self, "tnorm", TNorm(self.tnorm))
        object.__setattr__(self, "tconorm", TConorm(self.tconorm))

    def t(self, x, y):
        if self.tnorm is TNorm.LUKASIEWICZ:
            return np.maximum(np.add(x, y) - 1.0, 0.0)
        return np.minimum(x, y)

    def s(self, x, y):
        if self.tconorm is TConorm.LUKASIEWICZ:
            return np.minimum(np.add(x, y), 1.0)
        return np.maximum(x, y)

    def s_fold(self, values, axis=-1):
        """Fold the t-conorm over ``axis``; the empty fold is 0."""
        values = np.asarray(values, dtype=np.float64)
        if self.tconorm is TConorm.LUKASIEWICZ:
            return np.minimum(values.sum(axis=axis), 1.0)
        return values.max(axis=axis, initial=0.0)

    negation = staticmethod(negation)
    implicator = staticmethod(lukasiewicz_implicator)

    def as_dict(self) -> dict:
        return {"tnorm": self.tnorm.value, "tconorm": self.tconorm.value,
                "negation": "standard", "implicator": "lukasiewicz"}


@dataclass(frozen=True)
class SimilarityMatrix:
    feature: str
    kernel: Kernel
    degrees: np.ndarray


def _range_linear(diff, span):
    # constant feature: every pair fully similar
    if span == 0:
        return np.ones_like(diff)
    gap = diff / span
    return np.where(gap <= 0.25, np.maximum(1.0 - 4.0 * gap, 0.0), 0.0)


def _stddev_triangular(xi, xj, sigma):
    if sigma == 0:
        return (xi == xj).astype(np.float64)
    # min((xj - (xi - s)) / s, ((xi + s) - xj) / s) == 1 - |xi - xj| / s,
    # written so that swapping i and j is bitwise symmetric
    return np.maximum(1.0 - np.abs(xi - xj) / sigma, 0.0)


def _column_degrees(ds: DecisionSystem, f: int, xi, xj, kernel: Kernel, ddof: int):
    if not ds.is_real(f) or kernel is Kernel.CRISP_EQUALITY:
        return (xi == xj).astype(np.float64)
    if kernel is Kernel.RANGE_LINEAR:
        return _range_linear(np.abs(xi - xj), ds.feature_range[f])
    return _stddev_triangular(xi, xj, ds.feature_std(ddof)[f])


def similarity(ds: DecisionSystem, feature, i: int, j: int,
               kernel: Kernel = Kernel.RANGE_LINEAR, ddof: int = 0) -> float:
    """Degree to which objects ``i`` and ``j`` are alike on ``feature``.

    ``feature`` may also name the decision column, which is always compared
    by crisp equality. Nominal features always use crisp equality.
    """
    n = ds.object_count
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"object index out of range: ({i}, {j})")
    kernel = Kernel(kernel)
    if feature == ds.decision_name:
        return float(ds.labels[i] == ds.labels[j])
    f = ds.feature_index(feature)
    xi, xj = ds.data[i, f], ds.data[j, f]
    return float(_column_degrees(ds, f, np.float64(xi), np.float64(xj), kernel, ddof))


def similarity_matrix(ds: DecisionSystem, feature, kernel: Kernel = Kernel.RANGE_LINEAR,
                      ddof: int = 0) -> SimilarityMatrix:
    kernel = Kernel(kernel)
    if feature == ds.decision_name:
        codes = ds.decision_codes
        degrees = (codes[:, None] == codes[None, :]).astype(np.float64)
        return SimilarityMatrix(ds.decision_name, Kernel.CRISP_EQUALITY, degrees)
    f = ds.feature_index(feature)
    col = ds.data[:, f]
    degrees = _column_degrees(ds, f, col[:, None], col[None, :], kernel, ddof)
    used = kernel if ds.is_real(f) else Kernel.CRISP_EQUALITY
    return SimilarityMatrix(ds.feature_names[f], used, degrees)


def pair_degrees(ds: DecisionSystem, rows_i: np.ndarray, rows_j: np.ndarray,
                 kernel: Kernel = Kernel.RANGE_LINEAR, ddof: int = 0) -> np.ndarray:
    """Similarity of each object pair ``(rows_i[k], rows_j[k])`` on every feature.

    Returns a ``(len(rows_i), feature_count)`` array. Vectorized over features,
    used by clause generation on wide tables.
    """
    kernel = Kernel(kernel)
    xi = ds.data[rows_i]
    xj = ds.data[rows_j]
    out = (xi == xj).astype(np.float64)
    real = ds.real_mask
    if kernel is Kernel.CRISP_EQUALITY or not real.any():
        return out
    if kernel is Kernel.RANGE_LINEAR:
        span = ds.feature_range[real]
        safe = np.where(span == 0, 1.0, span)
        gap = np.abs(xi[:, real] - xj[:, real]) / safe
        deg = np.where(gap <= 0.25, np.maximum(1.0 - 4.0 * gap, 0.0), 0.0)
        deg[:, span == 0] = 1.0
    else:
        sigma = ds.feature_std(ddof)[real]
        safe = np.where(sigma == 0, 1.0, sigma)
        a, b = xi[:, real], xj[:, real]
        deg = np.maximum(1.0 - np.abs(a - b) / safe, 0.0)
        zero = sigma == 0
        deg[:, zero] = (a[:, zero] == b[:, zero])
    out[:, real] = deg
    return out
