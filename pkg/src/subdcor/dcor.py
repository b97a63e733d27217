"""
Empirical distance covariance and distance correlation.

All statistics here are the biased (V-statistic) estimators built from
double-centred Euclidean distance matrices.  With ``A`` and ``B`` the
double-centred distance matrices of two samples of size ``m``::

    dcov(x, y) = sum(A * B) / m**2
    dcor(x, y) = dcov(x, y) / sqrt(dcov(x, x) * dcov(y, y))

``dcor`` is therefore the normalised covariance itself (the square of the
"distance correlation" as some libraries report it).  Both forms lie in
``[0, 1]`` and order pairs identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import InsufficientSamplesError, InvalidInputError

__all__ = [
    "DCorResult",
    "as_samples",
    "pairwise_distances",
    "double_center",
    "distance_covariance",
    "distance_correlation",
]


@dataclass(frozen=True)
class DCorResult:
    dcov: float
    dvar_x: float
    dvar_y: float
    dcor: float
    degenerate: bool


def as_samples(values) -> np.ndarray:
    """Coerce ``values`` to a finite float64 matrix of shape ``(m, d)``.

    One-dimensional input is read as ``m`` scalar observations.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, np.newaxis]
    if arr.ndim != 2:
        raise InvalidInputError(f"expected a 1-D or 2-D array, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInputError(f"empty sample matrix of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("sample matrix contains non-finite values")
    return arr


def pairwise_distances(samples) -> np.ndarray:
    """Euclidean distances between all rows of ``samples``.

    The result is exactly symmetric with a zero diagonal.

    Examples
    --------
    >>> pairwise_distances([[0.0, 0.0], [3.0, 4.0]])
    array([[0., 5.],
           [5., 0.]])
    """
    x = as_samples(samples)
    if x.shape[0] == 1:
        return np.zeros((1, 1))
    return squareform(pdist(x, metric="euclidean"))


def double_center(dist) -> np.ndarray:
    """Subtract row and column means from ``dist`` and add back the grand mean.

    Parameters
    ----------
    dist : (m, m) array_like
        Square matrix, normally a distance matrix.

    Returns
    -------
    (m, m) ndarray
        Matrix whose rows and columns each sum to zero (up to rounding).

    Examples
    --------
    >>> double_center([[0.0, 1.0], [1.0, 0.0]])
    array([[-0.5,  0.5],
           [ 0.5, -0.5]])
    """
    a = np.asarray(dist, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidInputError(f"double centering needs a square matrix, got shape {a.shape}")
    row_means = a.mean(axis=1, keepdims=True)
    col_means = a.mean(axis=0, keepdims=True)
    return a - row_means - col_means + a.mean()


def _centered(samples) -> np.ndarray:
    return double_center(pairwise_distances(samples))


def _check_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = as_samples(x)
    y = as_samples(y)
    if x.shape[0] != y.shape[0]:
        raise InvalidInputError(
            f"x and y must have the same number of samples ({x.shape[0]} != {y.shape[0]})"
        )
    if x.shape[0] < 2:
        raise InsufficientSamplesError("distance statistics need at least 2 samples")
    return x, y


def _dcov_from_centered(a: np.ndarray, b: np.ndarray) -> float:
    m = a.shape[0]
    # The V-statistic is a squared norm; clip rounding noise below zero.
    return max(float(np.sum(a * b)) / (m * m), 0.0)


def distance_covariance(x, y) -> float:
    """Empirical distance covariance ``sum(A * B) / m**2`` of two samples.

    ``x`` and ``y`` need the same number of rows but may differ in width.
    """
    x, y = _check_pair(x, y)
    return _dcov_from_centered(_centered(x), _centered(y))


def distance_correlation(x, y) -> DCorResult:
    """Empirical distance correlation together with its ingredients.

    When either sample has zero distance variance (all rows identical) the
    correlation is reported as 0 and ``degenerate`` is set.
    """
    x, y = _check_pair(x, y)
    a = _centered(x)
    b = _centered(y)
    dcov = _dcov_from_centered(a, b)
    dvar_x = _dcov_from_centered(a, a)
    dvar_y = _dcov_from_centered(b, b)
    denom = dvar_x * dvar_y
    if denom == 0.0:
        return DCorResult(dcov, dvar_x, dvar_y, 0.0, True)
    dcor = min(dcov / math.sqrt(denom), 1.0)
    return DCorResult(dcov, dvar_x, dvar_y, dcor, False)
