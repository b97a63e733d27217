"""Category encoding and empirical joint / marginal / conditional pmfs."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .errors import EmptyTableError, InvalidInputError

__all__ = [
    "Direction",
    "DiscreteDataset",
    "JointTable",
    "encode",
    "joint_counts",
    "marginal",
    "conditional",
    "flatten_features",
]


class Direction(str, Enum):
    FORWARD = "forward"  # x -> y
    BACKWARD = "backward"  # y -> x

    @property
    def conditioning_axis(self) -> str:
        return "x" if self is Direction.FORWARD else "y"


@dataclass(frozen=True, eq=False)
class DiscreteDataset:
    """Paired observations stored as category indices.

    ``x_categories`` and ``y_categories`` map raw values to indices in
    ascending raw-value order; the supports are their lengths.
    """

    x_codes: np.ndarray
    y_codes: np.ndarray
    x_categories: Mapping
    y_categories: Mapping

    def __post_init__(self):
        x = np.asarray(self.x_codes, dtype=np.intp)
        y = np.asarray(self.y_codes, dtype=np.intp)
        if x.ndim != 1 or x.shape != y.shape:
            raise InvalidInputError("x_codes and y_codes must be 1-D and of equal length")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "x_codes", x)
        object.__setattr__(self, "y_codes", y)

    @property
    def n(self) -> int:
        return int(self.x_codes.shape[0])

    @property
    def x_support(self) -> int:
        return len(self.x_categories)

    @property
    def y_support(self) -> int:
        return len(self.y_categories)

    @property
    def supports(self) -> tuple[int, int]:
        return self.x_support, self.y_support

    def take(self, index) -> "DiscreteDataset":
        """Rows selected by ``index`` (mask or integer array), same category dictionaries."""
        return DiscreteDataset(
            self.x_codes[index], self.y_codes[index], self.x_categories, self.y_categories
        )

    def swapped(self) -> "DiscreteDataset":
        return DiscreteDataset(self.y_codes, self.x_codes, self.y_categories, self.x_categories)


@dataclass(frozen=True, eq=False)
class JointTable:
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    def __eq__(self, other):
        if not isinstance(other, JointTable):
            return NotImplemented
        return self.counts.shape == other.counts.shape and bool(
            np.array_equal(self.counts, other.counts)
        )


def _categories(values) -> dict:
    return {v: i for i, v in enumerate(sorted(set(values)))}


def encode(pairs: Iterable) -> DiscreteDataset:
    """Encode raw ``(x, y)`` pairs as category indices.

    Categories are numbered in ascending order of their raw values.

    >>> ds = encode([(5, 1), (3, 1), (5, 2)])
    >>> ds.x_codes.tolist(), ds.y_codes.tolist()
    ([1, 0, 1], [0, 0, 1])
    """
    pairs = list(pairs)
    if not pairs:
        raise InvalidInputError("cannot encode an empty sequence of pairs")
    try:
        xs, ys = zip(*pairs)
    except ValueError as exc:
        raise InvalidInputError("every observation must be an (x, y) pair") from exc
    return encode_columns(xs, ys)


def encode_columns(xs, ys) -> DiscreteDataset:
    """Same as :func:`encode` for two parallel columns."""
    xs = list(xs.tolist() if isinstance(xs, np.ndarray) else xs)
    ys = list(ys.tolist() if isinstance(ys, np.ndarray) else ys)
    if len(xs) != len(ys):
        raise InvalidInputError(f"columns differ in length ({len(xs)} != {len(ys)})")
    if not xs:
        raise InvalidInputError("cannot encode empty columns")
    x_cat = _categories(xs)
    y_cat = _categories(ys)
    x_codes = np.fromiter((x_cat[v] for v in xs), dtype=np.intp, count=len(xs))
    y_codes = np.fromiter((y_cat[v] for v in ys), dtype=np.intp, count=len(ys))
    return DiscreteDataset(x_codes, y_codes, x_cat, y_cat)


def joint_counts(ds: DiscreteDataset, fixed_supports: tuple[int, int] | None = None) -> JointTable:
    """Contingency table of ``ds`` over the given (or the dataset's own) supports."""
    sx, sy = ds.supports if fixed_supports is None else fixed_supports
    if sx < 1 or sy < 1:
        raise InvalidInputError(f"supports must be positive, got {(sx, sy)}")
    x, y = ds.x_codes, ds.y_codes
    if x.size and (x.min() < 0 or x.max() >= sx or y.min() < 0 or y.max() >= sy):
        raise InvalidInputError(f"category code outside supports {(sx, sy)}")
    flat = np.bincount(x * sy + y, minlength=sx * sy)
    return JointTable(flat.reshape(sx, sy))


def _axis_index(axis: str) -> int:
    axis = axis.lower()
    if axis not in ("x", "y"):
        raise InvalidInputError(f"axis must be 'x' or 'y', got {axis!r}")
    return 0 if axis == "x" else 1


def marginal(jt: JointTable, axis: str) -> np.ndarray:
    """Empirical pmf of X (``axis="x"``) or Y (``axis="y"``)."""
    total = jt.total
    if total < 1:
        raise EmptyTableError("marginal of an empty table")
    keep = _axis_index(axis)
    sums = jt.counts.sum(axis=1 - keep)
    return sums / total


def conditional(jt: JointTable, given: str) -> np.ndarray:
    """Row-stochastic matrix of conditional pmfs.

    Given X, row ``i`` is ``p(y | x_i)`` (shape ``|X| x |Y|``); given Y,
    row ``j`` is ``p(x | y_j)`` (shape ``|Y| x |X|``).  Categories with no
    observations get an all-zero row.
    """
    if jt.total < 1:
        raise EmptyTableError("conditional of an empty table")
    counts = jt.counts if _axis_index(given) == 0 else jt.counts.T
    counts = counts.astype(np.float64)
    row_sums = counts.sum(axis=1, keepdims=True)
    out = np.zeros_like(counts)
    np.divide(counts, row_sums, out=out, where=row_sums > 0)
    return out


def flatten_features(jt: JointTable, direction: Direction | str) -> tuple[np.ndarray, np.ndarray]:
    """(marginal of the cause, row-major flattened conditional of the effect).

    Forward treats X as the cause, backward treats Y as the cause.
    """
    direction = Direction(direction)
    axis = direction.conditioning_axis
    return marginal(jt, axis), conditional(jt, axis).ravel()
