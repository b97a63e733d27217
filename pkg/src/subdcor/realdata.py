"""
Loading and preprocessing of real cause-effect pair files.

Pair files hold one observation per line as whitespace-separated numeric
columns (the layout of the Tuebingen cause-effect collection).  Continuous
values are discretised with ``round(10**k * a)`` before inference, and a
pair is analysed only when both supports are small and similar.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

from .decision import Decision
from .empirical import encode_columns
from .errors import InvalidInputError, PairFormatError, QuantizationError
from .subsampling import SubsampleConfig, infer_direction

__all__ = [
    "RawPair",
    "PreprocessSpec",
    "Eligibility",
    "ScanRow",
    "ScanResult",
    "load_pair",
    "load_metadata",
    "decimal_digits",
    "quantize",
    "eligibility",
    "resolution_scan",
    "write_scan_csv",
    "SCAN_COLUMNS",
]

SCAN_COLUMNS = ("pair_id", "k", "support_x", "support_y", "eligible", "s_f", "s_b",
                "relative_gap", "decision", "stable")

_INT64_LIMIT = 2.0 ** 63


@dataclass(frozen=True, eq=False)
class RawPair:
    id: str
    x: np.ndarray
    y: np.ndarray
    truth: Decision | None = None
    # Largest number of digits after the decimal point seen in each column.
    max_decimals: tuple[int, int] = (0, 0)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if x.ndim != 1 or x.shape != y.shape or x.size < 1:
            raise InvalidInputError("x and y must be non-empty 1-D sequences of equal length")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise InvalidInputError("pair values must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class PreprocessSpec:
    max_support: int = 50
    support_equality_tolerance: int = 5

    def __post_init__(self):
        if self.max_support < 2:
            raise InvalidInputError("max_support must be at least 2")
        if self.support_equality_tolerance < 0:
            raise InvalidInputError("support_equality_tolerance must be non-negative")


def decimal_digits(token: str) -> int:
    """Number of digits after the decimal point needed to write ``token`` exactly."""
    try:
        exponent = Decimal(token).normalize().as_tuple().exponent
    except InvalidOperation as exc:
        raise InvalidInputError(f"not a number: {token!r}") from exc
    return max(-exponent, 0) if isinstance(exponent, int) else 0


def load_pair(path, columns: tuple[int, int] = (0, 1), skip_header: bool = False,
              pair_id: str | None = None, truth: Decision | None = None) -> RawPair:
    """Read two columns of a whitespace-separated numeric file.

    ``columns`` are 0-based indices of the x and y columns.  Blank lines are
    ignored; any other line that does not parse raises
    :class:`PairFormatError` with its 1-based line number.
    """
    path = Path(path)
    need = max(columns) + 1
    xs, ys = [], []
    dec_x = dec_y = 0
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            if skip_header and lineno == 1:
                continue
            tokens = line.split()
            if not tokens:
                continue
            if len(tokens) < max(need, 2):
                raise PairFormatError(
                    f"expected at least {max(need, 2)} columns, found {len(tokens)}", lineno, path
                )
            tx, ty = tokens[columns[0]], tokens[columns[1]]
            try:
                vx, vy = float(tx), float(ty)
            except ValueError:
                raise PairFormatError(f"non-numeric value in {line.strip()!r}", lineno, path) from None
            if not (math.isfinite(vx) and math.isfinite(vy)):
                raise PairFormatError("non-finite value", lineno, path)
            xs.append(vx)
            ys.append(vy)
            dec_x = max(dec_x, decimal_digits(tx))
            dec_y = max(dec_y, decimal_digits(ty))
    if not xs:
        raise PairFormatError("file contains no observations", None, path)
    return RawPair(pair_id or path.stem, np.array(xs), np.array(ys), truth, (dec_x, dec_y))


def load_metadata(path) -> dict[str, Decision]:
    """Ground truth records ``pair-id cause-column effect-column`` (1-based columns).

    Cause column 1 / effect column 2 means x -> y; the reverse means y -> x.
    Lines starting with ``#`` are comments.
    """
    path = Path(path)
    truths = {}
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise PairFormatError("expected 'pair-id cause-column effect-column'", lineno, path)
            pid, cause, effect = parts
            if (cause, effect) == ("1", "2"):
                truths[pid] = Decision.X_TO_Y
            elif (cause, effect) == ("2", "1"):
                truths[pid] = Decision.Y_TO_X
            else:
                raise PairFormatError(f"unsupported column roles {cause} {effect}", lineno, path)
    return truths


def quantize(values, k: int = 0) -> np.ndarray:
    """``round(10**k * v)`` with halves rounded away from zero.

    >>> quantize([1.4, 1.5, -1.5]).tolist()
    [1, 2, -2]
    """
    v = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("cannot quantize non-finite values")
    scaled = v * (10.0 ** int(k))
    rounded = np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)
    if rounded.size and np.max(np.abs(rounded)) >= _INT64_LIMIT:
        raise QuantizationError(f"values overflow 64-bit integers at resolution k={k}")
    return rounded.astype(np.int64)


@dataclass(frozen=True)
class Eligibility:
    eligible: bool
    support_x: int
    support_y: int


def eligibility(x_q, y_q, spec: PreprocessSpec = PreprocessSpec()) -> Eligibility:
    """Whether both supports are below ``max_support`` and within the tolerance of each other."""
    sx = int(np.unique(np.asarray(x_q)).size)
    sy = int(np.unique(np.asarray(y_q)).size)
    return Eligibility(_eligible_supports(sx, sy, spec), sx, sy)


def _eligible_supports(sx: int, sy: int, spec: PreprocessSpec) -> bool:
    return sx < spec.max_support and sy < spec.max_support and \
        abs(sx - sy) <= spec.support_equality_tolerance


@dataclass(frozen=True)
class ScanRow:
    pair_id: str
    k: int
    support_x: int
    support_y: int
    eligible: bool
    s_f: float | None = None
    s_b: float | None = None
    relative_gap: float | None = None
    decision: Decision | None = None


@dataclass(frozen=True)
class ScanResult:
    pair_id: str
    rows: list[ScanRow] = field(default_factory=list)

    @property
    def decisions(self) -> list[Decision]:
        return [r.decision for r in self.rows if r.eligible and r.decision is not None]

    @property
    def outcome(self) -> str:
        """``"stable"``, ``"unstable"`` or ``"no-eligible-resolution"``."""
        if not self.decisions:
            return "no-eligible-resolution"
        return "stable" if self.stable else "unstable"

    @property
    def stable(self) -> bool:
        ds = self.decisions
        return bool(ds) and all(d == ds[0] for d in ds)

    @property
    def decision(self) -> Decision | None:
        return self.decisions[0] if self.stable else None


def resolution_scan(pair: RawPair, k_values, cfg: SubsampleConfig | None = None,
                    spec: PreprocessSpec = PreprocessSpec(), seed=None) -> ScanResult:
    """Infer the direction at every resolution ``k``; eligible resolutions only."""
    k_values = [int(k) for k in k_values]
    if not k_values:
        raise InvalidInputError("k_values must not be empty")
    cfg = SubsampleConfig() if cfg is None else cfg
    rows = []
    for k in k_values:
        xq, yq = quantize(pair.x, k), quantize(pair.y, k)
        el = eligibility(xq, yq, spec)
        if not el.eligible or el.support_x < 2 or el.support_y < 2:
            rows.append(ScanRow(pair.id, k, el.support_x, el.support_y, False))
            continue
        report = infer_direction(encode_columns(xq, yq), cfg, seed=seed)
        rows.append(ScanRow(pair.id, k, el.support_x, el.support_y, True, report.s_f, report.s_b,
                            report.relative_gap, report.decision))
    return ScanResult(pair.id, rows)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Decision):
        return v.value
    return str(v)


def write_scan_csv(results, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SCAN_COLUMNS)
        for res in results:
            for r in res.rows:
                w.writerow([_fmt(v) for v in (r.pair_id, r.k, r.support_x, r.support_y, r.eligible,
                                              r.s_f, r.s_b, r.relative_gap, r.decision, res.stable)])
    return path


def pair_files(directory) -> list[Path]:
    """Data files in a pair directory, skipping descriptions and sidecars."""
    directory = Path(directory)
    skip = re.compile(r"_des|meta|readme", re.IGNORECASE)
    return sorted(p for p in directory.iterdir()
                  if p.is_file() and p.suffix == ".txt" and not skip.search(p.name))
