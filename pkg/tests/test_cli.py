import json
import shutil
import subprocess
import sys

import pytest

from asymcheck.cli import main, verify_iarrobino
from asymcheck.forms import TrilinearForm


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_example(capsys):
    code, out, _ = run(capsys, "classify", "--field", "f2", "--m", "2", "--entries", "1,1,2=1")
    assert code == 0
    assert json.loads(out) == {"postnikov": "NonOrientable", "x0": [1, 0]}


def test_classify_integral(capsys):
    code, out, _ = run(capsys, "classify", "--field", "int", "--m", "2",
                       "--entries", "1,1,2=1", "--entries", "1,2,2=1")
    assert code == 0 and json.loads(out) == {"wall_admissible": True}


def test_parse_example(capsys):
    code, out, _ = run(capsys, "parse", "x1^3")
    assert code == 0
    assert json.loads(out) == {"field": "Int", "m": 1, "entries": [[1, 1, 1, 1]]}


def test_parse_round_trips_through_reader(capsys):
    code, out, _ = run(capsys, "parse", "3*x1^2*x2 + 6*x1*x2*x3 - x3^3")
    mu = TrilinearForm.from_json(json.loads(out))
    assert mu.m == 3 and mu.coeff(1, 2, 3) == 1 and mu.coeff(1, 1, 2) == 1
    code, out3, _ = run(capsys, "classify", "--input", out.strip())
    assert code == 0 and "wall_admissible" in json.loads(out3)


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "parse", "x1^4")
    assert code == 2 and "error" in err


def test_usage_errors(capsys):
    assert run(capsys, "classify", "--field", "f2", "--entries", "1,1,1=1")[0] == 2
    assert run(capsys, "classify", "--field", "f2", "--m", "1", "--entries", "1,1=1")[0] == 2
    assert run(capsys, "classify", "--field", "fp:3", "--m", "1")[0] == 2
    assert run(capsys, "census", "--m", "6")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_derive(capsys):
    code, out, _ = run(capsys, "derive", "--field", "f2", "--m", "1", "--entries", "1,1,1=1")
    js = json.loads(out)
    assert code == 0 and js["degrees"]["-1"]["dimension"] == 1
    code, out, _ = run(capsys, "derive", "--field", "f2", "--m", "2", "--entries", "1,1,2=1",
                       "--shape", "sixfold")
    js = json.loads(out)
    assert js["hyperplane"]["a"] == [0, 1]


def test_derive_odd_prime_unit_constrained(capsys):
    code, out, _ = run(capsys, "derive", "--field", "fp:5", "--m", "1", "--unit-constrained")
    js = json.loads(out)
    assert all(v["dimension"] == 0 for v in js["degrees"].values())


def test_autos(capsys):
    code, out, _ = run(capsys, "autos", "--field", "f2", "--m", "3", "--entries", "1,2,3=1",
                       "--q", "3")
    assert code == 0 and json.loads(out)["automorphism"]["order"] == 3
    code, out, _ = run(capsys, "autos", "--field", "f2", "--m", "2", "--entries", "1,1,2=1")
    assert json.loads(out)["automorphism"] is None


def test_deform(capsys):
    code, out, _ = run(capsys, "deform", "--field", "f2", "--m", "1")
    js = json.loads(out)
    assert code == 0 and js["status"] == "Witness"
    code, out, _ = run(capsys, "deform", "--field", "f2", "--m", "3", "--budget", "4")
    assert json.loads(out)["status"] == "BudgetExceeded"


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "--field", "f2", "--m", "2")
    js = json.loads(out)
    assert code == 0 and js["conditions"]["i"]["status"] == "Failed"
    assert js["label"] == "Obstructed" and "not a proof" in js["note"]
    code, out, _ = run(capsys, "certify", "--field", "f2", "--m", "2", "--entries", "1,1,2=1",
                       "--format", "text", "--no-deformation")
    assert "(iii) Skipped" in out


def test_census_json_and_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "census", "--m", "2")
    js = json.loads(out)
    assert code == 0 and js["counts"]["scanned"] == 16 and js["ratios"]["I_alg"] == "4/7"
    target = tmp_path / "r.csv"
    code, _, _ = run(capsys, "census", "--m", "2", "--format", "csv", "--output", str(target))
    assert target.read_text().startswith("m,predicate,numerator,denominator,ratio")


def test_census_box(capsys):
    code, out, _ = run(capsys, "census", "--field", "int", "--m", "2", "--box-n", "1")
    assert json.loads(out)["ratios"]["realizable"] == "5/9"


def test_census_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"m": 3, "mode": "sample", "count": 15, "seed": 2}))
    code, out, _ = run(capsys, "census", "--config", str(cfg))
    assert code == 0 and json.loads(out)["counts"]["scanned"] == 15


def test_census_worker_env_identical(capsys, monkeypatch):
    argv = ["census", "--m", "3", "--mode", "sample", "--count", "25", "--seed", "7"]
    _, one, _ = run(capsys, *argv)
    monkeypatch.setenv("ASYMCHECK_WORKERS", "2")
    _, two, _ = run(capsys, *argv)
    assert one == two


def test_verify_iarrobino(capsys):
    code, out, err = run(capsys, "verify-iarrobino")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 6
    assert all(line.startswith("[ok]") for line in lines)
    assert "(4, 5, 6)" in err
    assert [ok for ok, _ in verify_iarrobino()] == [True] * 6


def test_verify_iarrobino_idempotent(capsys):
    assert run(capsys, "verify-iarrobino")[1] == run(capsys, "verify-iarrobino")[1]


def test_console_script():
    exe = shutil.which("asymcheck")
    cmd = [exe] if exe else [sys.executable, "-m", "asymcheck.cli"]
    res = subprocess.run(cmd + ["parse", "x1^3"], capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["entries"] == [[1, 1, 1, 1]]
    res = subprocess.run(cmd + ["parse", "x1^"], capture_output=True, text=True, check=False)
    assert res.returncode == 2
