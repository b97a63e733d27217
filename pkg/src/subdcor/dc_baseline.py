"""
DC-causal baseline: one equal-weight sample per category.

For the forward direction each category ``x_i`` contributes the sample
``(p(x_i), p(y | x_i))``, giving ``|X|`` rows; the backward direction uses
the ``|Y|`` samples ``(p(y_j), p(x | y_j))``.  The direction with the
smaller distance correlation is taken as causal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dcor import distance_correlation
from .decision import Decision, decide
from .empirical import Direction, DiscreteDataset, conditional, encode_columns, joint_counts, marginal
from .errors import InsufficientSamplesError
from .seeding import substream

__all__ = ["DirectionScore", "dc_features", "dc_score", "dc_infer", "support_bias_samples", "support_bias_curve"]


@dataclass(frozen=True)
class DirectionScore:
    direction: Direction
    score: float
    sample_count: int
    degenerate: bool = False


def dc_features(ds: DiscreteDataset, direction: Direction | str) -> tuple[np.ndarray, np.ndarray]:
    """The ``(|C| x 1, |C| x |E|)`` sample matrices for cause C and effect E."""
    direction = Direction(direction)
    axis = direction.conditioning_axis
    jt = joint_counts(ds)
    marg = marginal(jt, axis)
    if marg.size < 2:
        raise InsufficientSamplesError(
            f"DC-causal needs a cause support of at least 2, got {marg.size}"
        )
    return marg[:, np.newaxis], conditional(jt, axis)


def dc_score(ds: DiscreteDataset, direction: Direction | str) -> DirectionScore:
    direction = Direction(direction)
    a, b = dc_features(ds, direction)
    res = distance_correlation(a, b)
    return DirectionScore(direction, res.dcor, a.shape[0], res.degenerate)


def dc_scores(ds: DiscreteDataset) -> tuple[float, float]:
    return dc_score(ds, Direction.FORWARD).score, dc_score(ds, Direction.BACKWARD).score


def dc_infer(ds: DiscreteDataset) -> Decision:
    return decide(*dc_scores(ds))


def support_bias_samples(support_sizes, n: int, reps: int, seed) -> np.ndarray:
    """Forward DC scores for independent uniform pairs.

    Returns an array of shape ``(len(support_sizes), reps)``.  Replication
    ``r`` at support ``s`` draws X and Y independently and uniformly over
    ``s`` categories from the substream keyed ``(s, r)``.
    """
    sizes = [int(s) for s in support_sizes]
    if any(s < 2 for s in sizes):
        raise InsufficientSamplesError("support sizes must be at least 2")
    if reps < 1:
        raise ValueError("reps must be at least 1")
    out = np.empty((len(sizes), reps))
    for i, s in enumerate(sizes):
        for r in range(reps):
            rng = substream(seed, s, r)
            x = rng.integers(0, s, size=n)
            y = rng.integers(0, s, size=n)
            ds = encode_columns(x, y)
            out[i, r] = dc_score(ds, Direction.FORWARD).score
    return out


def support_bias_curve(support_sizes, n: int, reps: int, seed) -> np.ndarray:
    """Mean forward DC score per support size for independent uniform pairs."""
    return support_bias_samples(support_sizes, n, reps, seed).mean(axis=1)
