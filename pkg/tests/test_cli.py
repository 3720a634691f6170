import json
import subprocess
import sys

import pytest

from strichartz_gap import cli
from strichartz_gap.cli import CampaignConfig, _strip_timing, cmd_verify_all, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_qmatrix_csv(capsys):
    code, out, _ = run(capsys, "qmatrix", "1", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["1/2,1/2", "1/2,1/2"]


def test_qmatrix_and_kappa_json(capsys):
    _, out, _ = run(capsys, "qmatrix", "2")
    assert json.loads(out)["entries"][1] == ["1/4", "1/2", "1/4"]
    _, out, _ = run(capsys, "kappa", "2")
    assert json.loads(out)["entries"][0] == ["3/8", "1/4", "3/8"]


def test_charpoly(capsys):
    code, out, _ = run(capsys, "charpoly", "2")
    data = json.loads(out)
    assert code == 0
    assert data["coefficients"] == ["0/1", "1/4", "-5/4", "1/1"]
    assert data["provenance"] == "division_free"


def test_evaluate_extremal(tmp_path, capsys):
    path = tmp_path / "e11.json"
    path.write_text(json.dumps({"entries": [{"m": 1, "n": 1, "re": 1.0, "im": 0.0}]}))
    code, out, _ = run(capsys, "evaluate", str(path), "--gamma", "0.75")
    data = json.loads(out)
    assert code == 0 and abs(data["margin"]) < 1e-12
    code, out, _ = run(capsys, "evaluate", str(path), "--gamma", "1.0")
    assert code == 1 and json.loads(out)["witness"]["entries"][0]["m"] == 1


def test_evaluate_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "evaluate", str(bad))[0] == 2
    assert run(capsys, "evaluate", str(tmp_path / "missing.json"))[0] == 2
    neg = tmp_path / "neg.json"
    neg.write_text(json.dumps({"entries": [{"m": -1, "n": 0, "re": 1.0, "im": 0.0}]}))
    assert run(capsys, "evaluate", str(neg))[0] == 2


def test_hatcheck_cmd(capsys):
    code, out, _ = run(capsys, "hatcheck", "1", "1", "1", "1")
    assert code == 0 and json.loads(out)["signed_count"] == 8


def test_usage_errors(capsys):
    for argv in (["qmatrix", "-1"], ["qmatrix", "100"], ["verify-all", "--s-min", "5", "--s-max", "2"],
                 ["hatcheck", "5", "5", "5", "5"], ["evaluate", "x.json", "--gamma", "2"], []):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_unwritable_output_leaves_nothing(tmp_path, capsys):
    target = tmp_path / "no_such_dir" / "report.json"
    code, _, err = run(capsys, "verify-all", "--s-max", "2", "--out", str(target))
    assert code == 2 and "error" in err
    assert not target.exists() and not target.parent.exists()


def small_config(**kw):
    base = dict(S_min=1, S_max=6, hatcheck_max_n=4, functional_samples=500,
                contraction_samples=50, summation_max_S=5, stirling_max_p=20, first_column_max=10)
    base.update(kw)
    return CampaignConfig(**base)


def test_report_shape_and_pass():
    report = cmd_verify_all(small_config())
    assert report["passed"]
    assert [r["S"] for r in report["per_S"]] == list(range(1, 7))
    first = report["per_S"][0]
    assert first["spectral"]["gap_exact"] == "1/1"
    assert report["per_S"][1]["spectral"]["gap_exact"] == "3/4"
    assert report["hatcheck"]["passed"]


def test_deterministic_modulo_timing(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify-all", "--s-max", "4", "--hatcheck-max-n", "3", "--seed", "7",
                     "--out", str(path)]) == 0
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    assert _strip_timing(ra) == _strip_timing(rb)


def test_parallel_equals_serial():
    serial = cmd_verify_all(small_config(parallelism=1))
    parallel = cmd_verify_all(small_config(parallelism=2))
    assert serial["config"].pop("parallelism") == 1
    assert parallel["config"].pop("parallelism") == 2
    assert _strip_timing(serial) == _strip_timing(parallel)


def test_csv_report(tmp_path):
    path = tmp_path / "r.csv"
    assert main(["verify-all", "--s-max", "3", "--hatcheck-max-n", "2", "--format", "csv",
                 "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert len(lines) >= 4 and "," in lines[0]


def test_jobs_env(monkeypatch):
    monkeypatch.setenv(cli.JOBS_ENV, "3")
    assert cli._default_jobs() == 3
    monkeypatch.setenv(cli.JOBS_ENV, "junk")
    assert cli._default_jobs() == 1


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "strichartz_gap", "qmatrix", "0", "--format", "csv"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "1/1\n"
