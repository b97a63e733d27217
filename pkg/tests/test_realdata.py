import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from subdcor.decision import Decision
from subdcor.empirical import encode_columns
from subdcor.errors import InvalidInputError, PairFormatError, QuantizationError
from subdcor.realdata import (
    SCAN_COLUMNS,
    PreprocessSpec,
    RawPair,
    ScanResult,
    ScanRow,
    decimal_digits,
    eligibility,
    load_metadata,
    load_pair,
    pair_files,
    quantize,
    resolution_scan,
    write_scan_csv,
)
from subdcor.subsampling import SubsampleConfig

FAST = SubsampleConfig(m=20, p_grid=(0.3, 0.6), seed=0)


def test_load_pair(tmp_path):
    f = tmp_path / "pair.txt"
    f.write_text("1 2\n3 4\n")
    pair = load_pair(f)
    assert pair.x.tolist() == [1, 3] and pair.y.tolist() == [2, 4]
    assert pair.id == "pair"


def test_load_pair_header_strict(tmp_path):
    f = tmp_path / "h.txt"
    f.write_text("x y\n1 2\n3 4\n")
    with pytest.raises(PairFormatError) as exc:
        load_pair(f)
    assert exc.value.lineno == 1
    assert load_pair(f, skip_header=True).x.tolist() == [1, 3]


def test_load_pair_errors(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("1 2\n3\n")
    with pytest.raises(PairFormatError) as exc:
        load_pair(f)
    assert exc.value.lineno == 2
    f.write_text("")
    with pytest.raises(PairFormatError):
        load_pair(f)


def test_load_pair_column_roles_and_decimals(tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("1.25 7 0.5\n\n2.5 8 1e-3\n")
    pair = load_pair(f, columns=(2, 0))
    assert pair.x.tolist() == [0.5, 0.001] and pair.y.tolist() == [1.25, 2.5]
    assert pair.max_decimals == (3, 2)


def test_decimal_digits():
    assert decimal_digits("12") == 0
    assert decimal_digits("12.50") == 1
    assert decimal_digits("-0.125") == 3
    assert decimal_digits("1.5e2") == 0


def test_quantize_half_away_from_zero():
    assert quantize([1.4, 1.5, -1.5], 0).tolist() == [1, 2, -2]
    assert quantize([1.23], 2).tolist() == [123]


def test_quantize_overflow():
    with pytest.raises(QuantizationError):
        quantize([1e300], 0)
    with pytest.raises(InvalidInputError):
        quantize([np.inf], 0)


finite = st.floats(-1e6, 1e6, allow_nan=False)


@given(finite, finite, st.integers(0, 3))
def test_quantize_monotone(v, w, k):
    lo, hi = sorted((v, w))
    a, b = quantize([lo, hi], k)
    assert a <= b


@given(finite, st.integers(0, 3))
def test_quantize_round_trip(v, k):
    back = quantize([v], k)[0] / 10 ** k
    assert abs(back - v) <= 0.5 * 10 ** (-k) * (1 + 1e-9)


def test_eligibility_rules():
    spec = PreprocessSpec(max_support=50, support_equality_tolerance=5)
    assert eligibility(np.arange(13), np.arange(16), spec).eligible
    assert not eligibility(np.arange(10), np.arange(60), spec).eligible
    assert not eligibility(np.arange(10), np.arange(30), spec).eligible
    el = eligibility([1, 1, 2], [5, 6, 7], spec)
    assert (el.support_x, el.support_y) == (2, 3)


@given(st.integers(1, 80), st.integers(1, 80))
def test_eligibility_symmetric(a, b):
    assert eligibility(np.arange(a), np.arange(b)).eligible == \
        eligibility(np.arange(b), np.arange(a)).eligible


def _result(decisions):
    return ScanResult("p", [ScanRow("p", k, 5, 5, True, 0.1, 0.2, 0.5, d)
                            for k, d in enumerate(decisions)])


def test_scan_stability_flag():
    unstable = _result([Decision.X_TO_Y, Decision.Y_TO_X, Decision.X_TO_Y])
    assert not unstable.stable and unstable.outcome == "unstable"
    stable = _result([Decision.X_TO_Y] * 3)
    assert stable.stable and stable.decision is Decision.X_TO_Y
    assert ScanResult("p", [ScanRow("p", 0, 90, 90, False)]).outcome == "no-eligible-resolution"


def _noisy_pair(seed=0, n=400):
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 8, n) + rng.uniform(-0.3, 0.3, n).round(2)
    y = (x.round() * 3) % 11 + rng.integers(-1, 2, n) + rng.uniform(-0.3, 0.3, n).round(2)
    return RawPair("noisy", x, y)


def test_resolution_scan_end_to_end():
    res = resolution_scan(_noisy_pair(), [0, 2], FAST)
    first, second = res.rows
    pair = _noisy_pair()
    expected = eligibility(quantize(pair.x, 0), quantize(pair.y, 0))
    assert (first.support_x, first.support_y) == (expected.support_x, expected.support_y)
    assert first.eligible and first.decision is not None
    assert not second.eligible and second.decision is None
    assert res.stable == (len(res.decisions) == 1)


def test_resolution_scan_requires_k():
    with pytest.raises(InvalidInputError):
        resolution_scan(_noisy_pair(), [], FAST)


def test_load_quantize_encode_deterministic(tmp_path):
    pair = _noisy_pair(3)
    f = tmp_path / "p.txt"
    f.write_text("".join(f"{a!r} {b!r}\n" for a, b in zip(pair.x.tolist(), pair.y.tolist())))
    runs = []
    for _ in range(2):
        p = load_pair(f)
        runs.append(encode_columns(quantize(p.x, 1), quantize(p.y, 1)))
    assert runs[0].x_categories == runs[1].x_categories
    assert np.array_equal(runs[0].x_codes, runs[1].x_codes)
    assert np.array_equal(runs[0].y_codes, runs[1].y_codes)


def test_metadata(tmp_path):
    f = tmp_path / "meta.txt"
    f.write_text("# id cause effect\npair0001 1 2\npair0002 2 1\n")
    assert load_metadata(f) == {"pair0001": Decision.X_TO_Y, "pair0002": Decision.Y_TO_X}
    f.write_text("pair0001 1\n")
    with pytest.raises(PairFormatError):
        load_metadata(f)


def test_scan_csv(tmp_path):
    res = resolution_scan(_noisy_pair(), [0, 2], FAST)
    out = write_scan_csv([res], tmp_path / "scan.csv")
    lines = out.read_text().splitlines()
    assert tuple(lines[0].split(",")) == SCAN_COLUMNS
    assert len(lines) == 3
    assert lines[2].split(",")[4] == "false"


def test_pair_files_skip_descriptions(tmp_path):
    for name in ("pair0001.txt", "pair0001_des.txt", "pairmeta.txt", "pair0002.txt", "x.csv"):
        (tmp_path / name).write_text("1 2\n")
    assert [p.name for p in pair_files(tmp_path)] == ["pair0001.txt", "pair0002.txt"]
