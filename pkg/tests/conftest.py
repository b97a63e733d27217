import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from subdcor.empirical import encode_columns  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def dataset_from_counts(counts):
    """Dataset whose contingency table is exactly ``counts`` (categories 0..k-1)."""
    counts = np.asarray(counts)
    xs, ys = [], []
    for i in range(counts.shape[0]):
        for j in range(counts.shape[1]):
            xs += [i] * int(counts[i, j])
            ys += [j] * int(counts[i, j])
    return encode_columns(xs, ys)


@pytest.fixture
def from_counts():
    return dataset_from_counts


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
