"""
Subsampled distance correlation for causal direction inference.

Each of ``m`` Bernoulli(q) subsamples of the data yields one empirical
pair (cause marginal, flattened effect-given-cause conditional).  The
ensemble is treated as ``m`` draws of the two generating schemes and their
dependence is measured with the empirical distance correlation.  The
direction whose schemes look more independent (smaller score) is causal.

The inclusion probability is chosen from a grid: ``p_f`` and ``p_b``
minimise the forward and backward scores, and both directions are then
re-scored on fresh subsamples at ``p* = min(p_f, p_b)``.

Randomness is keyed, not sequential: subsample ``i`` of a run uses the
substream ``(seed, *stage_key, direction, i)``, so reports are reproducible
regardless of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dcor import DCorResult, distance_correlation
from .decision import Decision, decide, relative_gap
from .empirical import Direction, DiscreteDataset
from .errors import InsufficientSamplesError, InvalidSpecError, NoValidPError, SubsampleDegenerateError
from .seeding import substream

__all__ = [
    "DEFAULT_GRID",
    "SubsampleConfig",
    "DirectionReport",
    "PSelection",
    "MStabilityRow",
    "subsample",
    "subsample_mask",
    "ensemble_features",
    "direction_score",
    "select_p",
    "infer_direction",
    "m_stability_curve",
]

DEFAULT_GRID: tuple[float, ...] = tuple(float(v) for v in np.linspace(0.01, 0.99, 10))

# First element of every substream key; keeps the stages' randomness disjoint.
_SELECT, _FINAL, _MCURVE = 0, 1, 2
_DIRECTION_CODE = {Direction.FORWARD: 0, Direction.BACKWARD: 1}


def _check_q(q: float) -> float:
    q = float(q)
    if not 0.0 < q < 1.0:
        raise InvalidSpecError(f"inclusion probability must lie in (0, 1), got {q}")
    return q


@dataclass(frozen=True)
class SubsampleConfig:
    """Settings for :func:`infer_direction`.

    ``p_grid`` holds the candidate inclusion probabilities; pass a single
    value to fix q.  Subsamples keeping fewer than ``min_effective``
    observations are redrawn up to ``max_retries`` times.
    """

    m: int = 100
    p_grid: tuple[float, ...] = DEFAULT_GRID
    seed: int = 0
    min_effective: int = 10
    max_retries: int = 100

    def __post_init__(self):
        grid = tuple(float(p) for p in np.atleast_1d(self.p_grid))
        object.__setattr__(self, "p_grid", grid)
        if self.m < 2:
            raise InvalidSpecError(f"ensemble size m must be at least 2, got {self.m}")
        if not grid:
            raise InvalidSpecError("p_grid must not be empty")
        for q in grid:
            _check_q(q)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise InvalidSpecError("p_grid must be strictly increasing")
        if self.min_effective < 1:
            raise InvalidSpecError("min_effective must be at least 1")
        if self.max_retries < 0:
            raise InvalidSpecError("max_retries must be non-negative")

    @classmethod
    def linear_grid(cls, lo: float = 0.01, hi: float = 0.99, count: int = 10, **kwargs):
        grid = np.linspace(lo, hi, count) if count > 1 else np.array([lo])
        return cls(p_grid=tuple(float(v) for v in grid), **kwargs)


@dataclass(frozen=True)
class PSelection:
    p_f: float
    p_b: float
    p_star: float
    # p -> (forward score, backward score); None marks a degenerate ensemble.
    per_p_scores: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DirectionReport:
    forward_score: float
    backward_score: float
    p_star: float
    p_f: float
    p_b: float
    decision: Decision
    relative_gap: float
    per_p_scores: dict
    forward_degenerate: bool = False
    backward_degenerate: bool = False

    @property
    def s_f(self) -> float:
        return self.forward_score

    @property
    def s_b(self) -> float:
        return self.backward_score

    def to_dict(self) -> dict:
        return {
            "decision": self.decision.value,
            "s_f": self.forward_score,
            "s_b": self.backward_score,
            "relative_gap": self.relative_gap,
            "p_star": self.p_star,
            "p_f": self.p_f,
            "p_b": self.p_b,
            "forward_degenerate": self.forward_degenerate,
            "backward_degenerate": self.backward_degenerate,
            "per_p_scores": {
                repr(p): list(scores) for p, scores in sorted(self.per_p_scores.items())
            },
        }


def subsample_mask(n: int, q: float, rng: np.random.Generator, min_effective: int = 10,
                   max_retries: int = 100) -> np.ndarray:
    """Boolean mask keeping each of ``n`` rows independently with probability ``q``."""
    q = _check_q(q)
    for _ in range(max_retries + 1):
        mask = rng.random(n) < q
        if np.count_nonzero(mask) >= min_effective:
            return mask
    raise SubsampleDegenerateError(
        f"subsample kept fewer than {min_effective} of {n} rows after "
        f"{max_retries} redraws (q={q})"
    )


def subsample(ds: DiscreteDataset, q: float, rng: np.random.Generator, min_effective: int = 10,
              max_retries: int = 100) -> DiscreteDataset:
    """Bernoulli(q) subsample of ``ds``; category dictionaries are inherited."""
    return ds.take(subsample_mask(ds.n, q, rng, min_effective, max_retries))


def _check_dataset(ds: DiscreteDataset):
    if ds.x_support < 2 or ds.y_support < 2:
        raise InsufficientSamplesError(
            f"both supports must be at least 2, got {ds.supports}"
        )


def ensemble_features(ds: DiscreteDataset, direction: Direction | str, q: float, m: int, seed,
                      key: tuple[int, ...] = (), min_effective: int = 10,
                      max_retries: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Stacked per-subsample features for one direction.

    Returns ``(marginals, conditionals)`` with shapes ``(m, |C|)`` and
    ``(m, |C| * |E|)`` where C is the cause under ``direction``.
    Unobserved cause categories contribute all-zero conditional rows.
    """
    direction = Direction(direction)
    if m < 2:
        raise InvalidSpecError(f"ensemble size m must be at least 2, got {m}")
    sx, sy = ds.supports
    cells = ds.x_codes * sy + ds.y_codes
    counts = np.empty((m, sx * sy), dtype=np.float64)
    dir_code = _DIRECTION_CODE[direction]
    for i in range(m):
        rng = substream(seed, *key, dir_code, i)
        mask = subsample_mask(ds.n, q, rng, min_effective, max_retries)
        counts[i] = np.bincount(cells[mask], minlength=sx * sy)
    counts = counts.reshape(m, sx, sy)
    if direction is Direction.BACKWARD:
        counts = counts.transpose(0, 2, 1)
    cause_counts = counts.sum(axis=2)
    totals = cause_counts.sum(axis=1, keepdims=True)
    marginals = cause_counts / totals
    denom = cause_counts[:, :, np.newaxis]
    cond = np.zeros_like(counts)
    np.divide(counts, denom, out=cond, where=denom > 0)
    return marginals, cond.reshape(m, -1)


def _direction_result(ds, direction, q, m, seed, key=(), min_effective=10,
                      max_retries=100) -> DCorResult:
    marg, cond = ensemble_features(ds, direction, q, m, seed, key, min_effective, max_retries)
    return distance_correlation(marg, cond)


def direction_score(ds: DiscreteDataset, direction: Direction | str, q: float, m: int, seed,
                    key: tuple[int, ...] = (), min_effective: int = 10,
                    max_retries: int = 100) -> float:
    """Distance correlation between the subsampled cause and mechanism estimates."""
    _check_dataset(ds)
    q = _check_q(q)
    return _direction_result(ds, direction, q, m, seed, key, min_effective, max_retries).dcor


def _argmin_first(scores: list[tuple[float, float | None]]) -> float | None:
    best_p, best = None, math.inf
    for p, s in scores:  # grid is increasing, so strict < keeps the smaller p on ties
        if s is not None and s < best:
            best_p, best = p, s
    return best_p


def select_p(ds: DiscreteDataset, m: int, grid=DEFAULT_GRID, seed=0, min_effective: int = 10,
             max_retries: int = 100) -> PSelection:
    """Pick ``p_f``, ``p_b`` and ``p* = min(p_f, p_b)`` over ``grid``.

    Grid points whose ensemble is degenerate in a direction are skipped
    for that direction's argmin.
    """
    _check_dataset(ds)
    grid = tuple(_check_q(p) for p in np.atleast_1d(grid))
    if not grid:
        raise InvalidSpecError("p grid must not be empty")
    per_p: dict[float, tuple] = {}
    fwd, bwd = [], []
    for gi, p in enumerate(grid):
        row = []
        for direction, acc in ((Direction.FORWARD, fwd), (Direction.BACKWARD, bwd)):
            res = _direction_result(ds, direction, p, m, seed, (_SELECT, gi), min_effective,
                                    max_retries)
            score = None if res.degenerate else res.dcor
            acc.append((p, score))
            row.append(score)
        per_p[p] = tuple(row)
    p_f = _argmin_first(fwd)
    p_b = _argmin_first(bwd)
    if p_f is None or p_b is None:
        raise NoValidPError("every grid point gave a degenerate ensemble in at least one direction")
    return PSelection(p_f, p_b, min(p_f, p_b), per_p)


def infer_direction(ds: DiscreteDataset, cfg: SubsampleConfig | None = None,
                    seed=None) -> DirectionReport:
    """Run the full procedure: grid selection, then both directions at ``p*``.

    ``seed`` overrides ``cfg.seed`` and may also be a ``SeedSequence``.
    """
    cfg = SubsampleConfig() if cfg is None else cfg
    seed = cfg.seed if seed is None else seed
    sel = select_p(ds, cfg.m, cfg.p_grid, seed, cfg.min_effective, cfg.max_retries)
    fwd = _direction_result(ds, Direction.FORWARD, sel.p_star, cfg.m, seed, (_FINAL,),
                            cfg.min_effective, cfg.max_retries)
    bwd = _direction_result(ds, Direction.BACKWARD, sel.p_star, cfg.m, seed, (_FINAL,),
                            cfg.min_effective, cfg.max_retries)
    return DirectionReport(
        forward_score=fwd.dcor,
        backward_score=bwd.dcor,
        p_star=sel.p_star,
        p_f=sel.p_f,
        p_b=sel.p_b,
        decision=decide(fwd.dcor, bwd.dcor),
        relative_gap=relative_gap(fwd.dcor, bwd.dcor),
        per_p_scores=sel.per_p_scores,
        forward_degenerate=fwd.degenerate,
        backward_degenerate=bwd.degenerate,
    )


@dataclass(frozen=True)
class MStabilityRow:
    m: int
    forward_mean: float
    forward_std: float
    backward_mean: float
    backward_std: float


def m_stability_curve(ds: DiscreteDataset, q: float, m_values, reps: int, seed,
                      min_effective: int = 10, max_retries: int = 100) -> list[MStabilityRow]:
    """Mean and sample standard deviation of both direction scores per ensemble size.

    ``reps`` independent ensembles are scored for every ``m``; with a single
    repetition the standard deviation is reported as 0.
    """
    _check_dataset(ds)
    q = _check_q(q)
    if reps < 1:
        raise InvalidSpecError("reps must be at least 1")
    rows = []
    for m in m_values:
        m = int(m)
        if m < 2:
            raise InvalidSpecError(f"ensemble sizes must be at least 2, got {m}")
        scores = np.empty((2, reps))
        for r in range(reps):
            for d, direction in enumerate((Direction.FORWARD, Direction.BACKWARD)):
                scores[d, r] = _direction_result(ds, direction, q, m, seed, (_MCURVE, m, r),
                                                 min_effective, max_retries).dcor
        ddof = 1 if reps > 1 else 0
        rows.append(MStabilityRow(
            m,
            float(scores[0].mean()), float(scores[0].std(ddof=ddof)),
            float(scores[1].mean()), float(scores[1].std(ddof=ddof)),
        ))
    return rows
