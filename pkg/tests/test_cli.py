import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from speedrobust import cli
from speedrobust.core import BagProfile


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bags_sandalg(capsys, tmp_path):
    path = tmp_path / "p.json"
    code, out, _ = run(capsys, "bags", "--algo", "sandalg", "--m", "3", "--out", str(path))
    assert code == 0 and "9/19" in out
    prof = BagProfile.from_json(path.read_text())
    assert prof.sizes == (F(4, 19), F(6, 19), F(9, 19))


def test_bags_roundtrip(capsys, tmp_path):
    path = tmp_path / "p.json"
    run(capsys, "bags", "--algo", "unit01-43", "--n", "150", "--m", "50", "--out", str(path))
    prof = BagProfile.from_json(path.read_text())
    assert prof.meta["branch"] == "table_B"
    assert BagProfile.from_json(prof.to_json()) == prof


def test_bags_fluid01_exact(capsys):
    code, out, _ = run(capsys, "bags", "--algo", "sandalg01-exact", "--m", "4")
    assert code == 0 and out.count("4/5") == 2 and out.count("6/5") == 2


@pytest.mark.parametrize("argv", [
    ["bags", "--algo", "nope", "--m", "3"],
    ["bags", "--algo", "oddalgo", "--n", "0", "--m", "3"],
    ["bags", "--algo", "sandalg", "--m", "0"],
    ["bags", "--algo", "m2-opt", "--n", "5", "--m", "3"],
    ["reproduce", "--target", "nothing"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = cli.main(argv)
        raise SystemExit(code)
    assert info.value.code == 1


def profile_file(capsys, tmp_path, *argv):
    path = tmp_path / "prof.json"
    assert run(capsys, "bags", *argv, "--out", str(path))[0] == 0
    return str(path)


def test_evaluate_s01(capsys, tmp_path):
    prof = profile_file(capsys, tmp_path, "--algo", "sandalg01-exact", "--m", "5")
    out_prefix = tmp_path / "rep"
    code, out, _ = run(capsys, "evaluate", "--profile", prof, "--family", "s01", "--out", str(out_prefix))
    assert code == 0 and "max ratio 20/17" in out
    summary = json.loads((tmp_path / "rep.json").read_text())
    assert summary["max_ratio"] == "20/17"
    assert (tmp_path / "rep.csv").read_text().startswith("speeds,alg,opt,ratio")


def test_evaluate_sk(capsys, tmp_path):
    prof = profile_file(capsys, tmp_path, "--algo", "sandalg", "--m", "4")
    code, out, _ = run(capsys, "evaluate", "--profile", prof, "--family", "sk")
    assert code == 0 and "256/175" in out and "certified" in out


def test_evaluate_grid_single_machine(capsys, tmp_path):
    prof = profile_file(capsys, tmp_path, "--algo", "lpt", "--n", "3", "--m", "1")
    code, out, _ = run(capsys, "evaluate", "--profile", prof, "--family", "grid",
                       "--grid-resolution", "6")
    assert code == 0 and "max ratio 1 " in out and "heuristic" in out


def test_evaluate_file_family(capsys, tmp_path):
    prof = profile_file(capsys, tmp_path, "--algo", "m2-opt", "--n", "10", "--m", "2")
    configs = tmp_path / "c.json"
    configs.write_text(json.dumps([[1, 1], [1, 2]]))
    code, out, _ = run(capsys, "evaluate", "--profile", prof, "--family", "file",
                       "--configs", str(configs))
    assert code == 0 and "2 configurations" in out


def test_evaluate_dimension_mismatch(capsys, tmp_path):
    prof = profile_file(capsys, tmp_path, "--algo", "sandalg", "--m", "3")
    inst = tmp_path / "i.json"
    inst.write_text(json.dumps({"jobs": ["1"], "m": 4, "kind": "fluid"}))
    code, _, err = run(capsys, "evaluate", "--profile", prof, "--instance", str(inst))
    assert code == 1 and "mismatch" in err


def test_exact_limit_env(capsys, tmp_path, monkeypatch):
    prof = profile_file(capsys, tmp_path, "--algo", "sandalg01-exact", "--m", "6")
    monkeypatch.setenv("SPEEDROBUST_EXACT_LIMIT", "3")
    code, out, _ = run(capsys, "evaluate", "--profile", prof)
    assert code == 0 and "upper bound" in out


@pytest.mark.parametrize("target,needle", [
    ("m6-certificate", "589/391"),
    ("rho-limits", "1.581976706869"),
    ("examples", "3m jobs"),
])
def test_reproduce(capsys, tmp_path, target, needle):
    csv_path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "reproduce", "--target", target, "--out", str(csv_path))
    assert code == 0 and needle in out and out.strip().endswith("PASS")
    assert csv_path.read_text().count("\n") > 1


def test_reproduce_claim_failure_exit(capsys, monkeypatch):
    monkeypatch.setitem(cli.TARGETS, "examples", lambda args: (False, ["x"], []))
    code, out, _ = run(capsys, "reproduce", "--target", "examples")
    assert code == 2 and "FAIL" in out


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "speedrobust.cli", "bags", "--algo", "sandalg",
                          "--m", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and "2/3" in res.stdout
