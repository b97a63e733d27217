import json

import pytest

from subdcor.cli import main

FAST = ["--m", "6", "--q-grid", "0.3,0.6,2"]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out.strip().splitlines()
    return code, (json.loads(out[-1]) if out else None)


@pytest.fixture
def pairfile(tmp_path, capsys):
    path = tmp_path / "gen.txt"
    code, summary = run(capsys, "synth", "exp1-modified", "--seed", 5, "--support", 6,
                        "--n-samples", 600, "--out", path)
    assert code == 0 and summary["truth"] == "x->y"
    return path


def test_synth_writes_data_and_sidecar(pairfile):
    assert len(pairfile.read_text().splitlines()) == 600
    meta = json.loads(pairfile.with_name(pairfile.name + ".meta.json").read_text())
    assert meta["spec"]["seed"] == 5


def test_infer_prints_report(capsys, pairfile, tmp_path):
    code, summary = run(capsys, "infer", pairfile, "--seed", 1, *FAST, "--out", tmp_path / "a.csv")
    assert code == 0
    assert {"decision", "s_f", "s_b", "p_star", "relative_gap"} <= set(summary)
    run(capsys, "infer", pairfile, "--seed", 1, *FAST, "--out", tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_infer_fixed_q(capsys, pairfile):
    code, summary = run(capsys, "infer", pairfile, "--seed", 1, "--m", 6, "--q", 0.4)
    assert code == 0 and summary["p_star"] == 0.4


def test_bench_zero_datasets_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bench", "--seed", "1", "--n-datasets", "0"])
    assert exc.value.code == 2


def test_missing_seed_is_usage_error(capsys, pairfile):
    with pytest.raises(SystemExit) as exc:
        main(["infer", str(pairfile)])
    assert exc.value.code == 2


def test_unknown_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_runtime_failure_exit_1(capsys, tmp_path):
    assert main(["infer", str(tmp_path / "nope.txt"), "--seed", "1"]) == 1
    assert "error" in capsys.readouterr().err


def test_bench_is_byte_reproducible(capsys, tmp_path):
    args = ["bench", "--seed", 9, "--family", "exp2-modified", "--support", "4,5",
            "--n-datasets", 2, "--n-samples", 300, *FAST]
    code, summary = run(capsys, *args, "--out", tmp_path / "a.csv")
    assert code == 0 and len(summary["cells"]) == 4
    run(capsys, *args, "--out", tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_mcurve_rows(capsys, pairfile, tmp_path):
    out = tmp_path / "m.csv"
    code, summary = run(capsys, "mcurve", pairfile, "--seed", 2, "--m-values", "5,10,20",
                        "--reps", 2, "--q", 0.5, "--out", out)
    assert code == 0 and summary["rows"] == 3
    assert len(out.read_text().splitlines()) == 1 + 3


def test_mcurve_from_family(capsys):
    code, summary = run(capsys, "mcurve", "--family", "exp2-modified", "--support", 5,
                        "--n-samples", 300, "--seed", 2, "--m-values", "5", "--reps", 1, *FAST)
    assert code == 0 and summary["q"] in (0.3, 0.6)


def test_pairs_scan(capsys, tmp_path):
    d = tmp_path / "pairs"
    d.mkdir()
    for i in (1, 2):
        run(capsys, "synth", "exp2-modified", "--seed", i, "--support", 5, "--n-samples", 300,
            "--out", d / f"pair000{i}.txt")
    meta = tmp_path / "meta.txt"
    meta.write_text("pair0001 1 2\npair0002 1 2\n")
    out = tmp_path / "scan.csv"
    code, summary = run(capsys, "pairs", d, "--seed", 3, "--k", "0,1", "--meta", meta, *FAST,
                        "--out", out)
    assert code == 0 and summary["pairs"] == 2
    assert summary["judged"] == summary["stable"]
    assert len(out.read_text().splitlines()) == 1 + 4
