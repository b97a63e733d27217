"""
Synthetic cause-effect benchmarks with ground truth x -> y.

Four families are available:

``exp1-original``
    Additive noise ``Y = f(X) + N``.  ``p(x)`` and ``p(n)`` are normalised
    vectors of random integers in ``[1, |X| // 4]``; ``f`` is any random map
    into ``{0, ..., |Y0| - 1}``.
``exp1-modified``
    ``Y = (f(X) + N) mod |Y0|`` with ``f`` injective and ``p(x)``, ``p(n)``
    normalised Uniform[0, 1] vectors.
``exp2-original``
    ``p(x)`` as in exp1-original; each row ``p(y | x)`` is drawn (with
    replacement) from a reference set of ``|X| // 4`` integer-scheme pmfs.
``exp2-modified``
    ``p(x)`` and every row ``p(y | x)`` are independent normalised
    Uniform[0, 1] vectors.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .decision import Decision
from .empirical import DiscreteDataset, encode_columns
from .errors import InvalidSpecError
from .seeding import substream

__all__ = [
    "FAMILIES",
    "DEFAULT_NOISE_SUPPORT",
    "GeneratorSpec",
    "GroundTruthDataset",
    "generate",
    "gen_exp1_original",
    "gen_exp1_modified",
    "gen_exp2_original",
    "gen_exp2_modified",
    "sample_dataset",
    "write_dataset",
]

FAMILIES = ("exp1-original", "exp1-modified", "exp2-original", "exp2-modified")
DEFAULT_NOISE_SUPPORT = (-2, -1, 0, 1, 2)


@dataclass(frozen=True)
class GeneratorSpec:
    family: str = "exp1-modified"
    x_support: int = 20
    y_support: int = 20
    noise_support: tuple[int, ...] = DEFAULT_NOISE_SUPPORT
    n: int = 2000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "noise_support", tuple(int(v) for v in self.noise_support))
        if self.family not in FAMILIES:
            raise InvalidSpecError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.x_support < 2 or self.y_support < 2:
            raise InvalidSpecError("supports must be at least 2")
        if self.n < 1:
            raise InvalidSpecError("n must be at least 1")
        if self.family.startswith("exp1") and not self.noise_support:
            raise InvalidSpecError("noise_support must not be empty for exp1 families")


@dataclass(frozen=True, eq=False)
class GroundTruthDataset:
    dataset: DiscreteDataset
    pmf_x: np.ndarray
    mechanism: np.ndarray  # |X| x len(y_values), row-stochastic
    y_values: np.ndarray  # raw Y label of each mechanism column
    spec: GeneratorSpec
    truth: Decision = Decision.X_TO_Y
    extras: dict = field(default_factory=dict)

    @property
    def joint(self) -> np.ndarray:
        return self.pmf_x[:, np.newaxis] * self.mechanism


def _integer_pmf(size: int, upper: int, rng: np.random.Generator) -> np.ndarray:
    weights = rng.integers(1, upper + 1, size=size).astype(np.float64)
    return weights / weights.sum()


def _uniform_pmf(size: int, rng: np.random.Generator) -> np.ndarray:
    weights = rng.random(size)
    while weights.sum() == 0.0:  # pragma: no cover - probability zero
        weights = rng.random(size)
    return weights / weights.sum()


def _check_pmf(pmf: np.ndarray, what: str):
    if pmf.ndim != 1 or pmf.size < 1 or np.any(pmf < 0) or not np.all(np.isfinite(pmf)):
        raise InvalidSpecError(f"{what} must be a non-negative finite vector")
    if abs(pmf.sum() - 1.0) > 1e-9:
        raise InvalidSpecError(f"{what} sums to {pmf.sum()!r}, not 1")


def sample_dataset(pmf_x, mechanism, n: int, rng: np.random.Generator,
                   x_values=None, y_values=None) -> DiscreteDataset:
    """Draw ``n`` pairs with ``x ~ pmf_x`` and ``y ~ mechanism[x]``.

    Values are labelled by ``x_values`` / ``y_values`` (default: indices) and
    then encoded, so the dataset's supports are the observed categories.
    """
    pmf_x = np.asarray(pmf_x, dtype=np.float64)
    mech = np.asarray(mechanism, dtype=np.float64)
    _check_pmf(pmf_x, "pmf_x")
    if mech.ndim != 2 or mech.shape[0] != pmf_x.size:
        raise InvalidSpecError(f"mechanism must have {pmf_x.size} rows, got shape {mech.shape}")
    for i, row in enumerate(mech):
        _check_pmf(row, f"mechanism row {i}")
    if n < 1:
        raise InvalidSpecError("n must be at least 1")
    x_values = np.arange(pmf_x.size) if x_values is None else np.asarray(x_values)
    y_values = np.arange(mech.shape[1]) if y_values is None else np.asarray(y_values)

    x = rng.choice(pmf_x.size, size=n, p=pmf_x / pmf_x.sum())
    cum = np.cumsum(mech, axis=1)
    u = rng.random(n)
    y = (u[:, np.newaxis] >= cum[x]).sum(axis=1)
    # Rounding in cumsum may leave the last edge just below 1.
    y = np.minimum(y, mech.shape[1] - 1)
    # Never land on a zero-probability column because of that clamp.
    while np.any(mech[x, y] == 0):
        bad = mech[x, y] == 0
        y[bad] -= 1
    return encode_columns(x_values[x], y_values[y])


def _exp1_mechanism(f: np.ndarray, noise_support, pmf_n: np.ndarray, y0: int | None):
    """Conditional matrix of Y = f(X) + N, optionally reduced mod y0."""
    noise = np.asarray(noise_support)
    values = f[:, np.newaxis] + noise[np.newaxis, :]
    if y0 is not None:
        values = np.mod(values, y0)
        y_values = np.arange(y0)
    else:
        y_values = np.arange(values.min(), values.max() + 1)
    mech = np.zeros((f.size, y_values.size))
    cols = values - y_values[0]
    for i in range(f.size):
        np.add.at(mech[i], cols[i], pmf_n)
    return mech, y_values


def gen_exp1_original(spec: GeneratorSpec, rng: np.random.Generator) -> GroundTruthDataset:
    if spec.x_support < 4:
        raise InvalidSpecError("exp1-original needs |X| >= 4")
    upper = spec.x_support // 4
    pmf_x = _integer_pmf(spec.x_support, upper, rng)
    f = rng.integers(0, spec.y_support, size=spec.x_support)
    pmf_n = _integer_pmf(len(spec.noise_support), upper, rng)
    mech, y_values = _exp1_mechanism(f, spec.noise_support, pmf_n, None)
    ds = sample_dataset(pmf_x, mech, spec.n, rng, y_values=y_values)
    return GroundTruthDataset(ds, pmf_x, mech, y_values, spec, extras={"f": f, "pmf_noise": pmf_n})


def gen_exp1_modified(spec: GeneratorSpec, rng: np.random.Generator) -> GroundTruthDataset:
    if spec.x_support > spec.y_support:
        raise InvalidSpecError("exp1-modified needs |X| <= |Y0| for an injective f")
    pmf_x = _uniform_pmf(spec.x_support, rng)
    pmf_n = _uniform_pmf(len(spec.noise_support), rng)
    f = rng.permutation(spec.y_support)[: spec.x_support]
    mech, y_values = _exp1_mechanism(f, spec.noise_support, pmf_n, spec.y_support)
    ds = sample_dataset(pmf_x, mech, spec.n, rng, y_values=y_values)
    return GroundTruthDataset(ds, pmf_x, mech, y_values, spec, extras={"f": f, "pmf_noise": pmf_n})


def gen_exp2_original(spec: GeneratorSpec, rng: np.random.Generator) -> GroundTruthDataset:
    if spec.x_support < 4:
        raise InvalidSpecError("exp2-original needs |X| >= 4")
    upper = spec.x_support // 4
    pmf_x = _integer_pmf(spec.x_support, upper, rng)
    reference = np.stack([_integer_pmf(spec.y_support, upper, rng) for _ in range(upper)])
    picks = rng.integers(0, upper, size=spec.x_support)
    mech = reference[picks]
    y_values = np.arange(spec.y_support)
    ds = sample_dataset(pmf_x, mech, spec.n, rng)
    return GroundTruthDataset(ds, pmf_x, mech, y_values, spec,
                              extras={"reference": reference, "picks": picks})


def gen_exp2_modified(spec: GeneratorSpec, rng: np.random.Generator) -> GroundTruthDataset:
    pmf_x = _uniform_pmf(spec.x_support, rng)
    mech = np.stack([_uniform_pmf(spec.y_support, rng) for _ in range(spec.x_support)])
    ds = sample_dataset(pmf_x, mech, spec.n, rng)
    return GroundTruthDataset(ds, pmf_x, mech, np.arange(spec.y_support), spec)


_GENERATORS = {
    "exp1-original": gen_exp1_original,
    "exp1-modified": gen_exp1_modified,
    "exp2-original": gen_exp2_original,
    "exp2-modified": gen_exp2_modified,
}


def generate(spec: GeneratorSpec, rng: np.random.Generator | None = None) -> GroundTruthDataset:
    """Generate one dataset; without ``rng`` the stream is derived from ``spec.seed``."""
    rng = substream(spec.seed) if rng is None else rng
    return _GENERATORS[spec.family](spec, rng)


def write_dataset(gt: GroundTruthDataset, path) -> Path:
    """Write the raw pairs as two whitespace-separated columns plus a JSON sidecar.

    The sidecar lives next to the data as ``<path>.meta.json``.
    """
    path = Path(path)
    ds = gt.dataset
    x_raw = np.array(list(ds.x_categories))[ds.x_codes]
    y_raw = np.array(list(ds.y_categories))[ds.y_codes]
    with path.open("w") as fh:
        for a, b in zip(x_raw.tolist(), y_raw.tolist()):
            fh.write(f"{a} {b}\n")
    meta = {"spec": asdict(gt.spec), "truth": gt.truth.value, "n": ds.n}
    meta["spec"]["noise_support"] = list(gt.spec.noise_support)
    sidecar = path.with_name(path.name + ".meta.json")
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return sidecar
