import csv
import io
import json
import math
import subprocess
import sys

import pytest

from binarytails import cli


def run(capsys, *argv):
    with pytest.raises(SystemExit) as info:
        code = cli.main(list(argv))
        raise SystemExit(code)
    out = capsys.readouterr()
    return info.value.code, out.out, out.err


def results(text):
    return json.loads(text)["results"]


def test_norm_half(capsys):
    code, out, _ = run(capsys, "norm", "--p", "0.5")
    assert code == 0
    row = results(out)[0]
    assert float(row["g"]) == pytest.approx(1.0, abs=5e-7)
    assert float(row["Q"]) == pytest.approx(0.353553, abs=5e-7)


def test_norm_point_two(capsys):
    code, out, _ = run(capsys, "norm", "--p", "0.2")
    assert code == 0
    assert float(results(out)[0]["Q"]) == pytest.approx(math.sqrt(0.6 / (4 * math.log(4))), abs=5e-6)


def test_norm_out_of_range(capsys):
    code, _, err = run(capsys, "norm", "--p", "1.2")
    assert code == 2
    assert "(0, 1)" in err


def test_gfun_table(capsys):
    code, out, _ = run(capsys, "gfun", "--grid", "0.01:0.99:0.01", "--format", "csv")
    assert code == 0
    lines = [line for line in out.splitlines() if not line.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(lines))))
    assert len(rows) == 99
    g = [float(r["g"]) for r in rows]
    assert max(abs(a - b) for a, b in zip(g, reversed(g))) <= 1e-6
    assert list(rows[0]) == ["r", "g", "two_sqrt_r1mr", "two_max_r_1mr", "Q", "arg_lambda"]


def test_gfun_single_and_empty(capsys):
    code, out, _ = run(capsys, "gfun", "--grid", "0.5")
    assert code == 0 and len(results(out)) == 1
    assert float(results(out)[0]["g"]) == pytest.approx(1.0, abs=1e-6)
    code, _, err = run(capsys, "gfun", "--grid", "0.6:0.5:0.1")
    assert code == 2 and "empty grid" in err


def test_bound_report(capsys):
    code, out, _ = run(capsys, "bound", "--w", "pow:0.75", "--u", "2")
    assert code == 0
    doc = json.loads(out)
    row = doc["results"][0]
    assert float(row["v_value"]) == pytest.approx(1.6875, rel=1e-9)
    assert row["certified"] == "true"
    assert {c["name"] for c in doc["checks"]} == {"A1", "A2", "A3", "A4", "A5"}
    assert set(doc["constants"]) == {"C", "C1"}
    assert doc["tool"]["version"] == cli.__version__


def test_bound_rejections(capsys):
    code, _, err = run(capsys, "bound", "--w", "pow:0.40", "--u", "2")
    assert code == 2 and "A3" in err
    code, _, err = run(capsys, "bound", "--w", "pow:0.75", "--u", "0.5")
    assert code == 2 and "u" in err


def test_reals_use_17_significant_digits(capsys):
    _, out, _ = run(capsys, "norm", "--p", "0.5")
    assert results(out)[0]["Q"] == format(math.sqrt(1 / 8), ".17g")


def test_audit_flags_counterexample(capsys):
    code, out, _ = run(capsys, "audit", "--lambdas", "20")
    assert code == 0
    check = json.loads(out)["checks"][0]
    assert check["passed"] == "true" and "global equality holds: no" in check["detail"]
    rows = results(out)
    hit = [r for r in rows if float(r["r"]) == pytest.approx(0.1) and r["lam"] == "20"]
    assert hit and float(hit[0]["beta"]) == pytest.approx(6.566e6, rel=1e-3)


def test_verify_binary(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "binary")
    assert code == 0
    names = " ".join(c["name"] for c in json.loads(out)["checks"])
    for word in ("g(r) = g(1-r)", "quadrant", "Q(p)"):
        assert word in names


def test_verify_all(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "all")
    assert code == 0


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "--p", "0.5", "--n", "4", "--u", "0.35355339059327373",
                       "--samples", "100000", "--seed", "3")
    assert code == 0
    row = results(out)[0]
    assert float(row["exact"]) == 0.0625
    assert float(row["ci_lo"]) <= 0.0625 <= float(row["ci_hi"])


def test_output_file_is_deterministic(tmp_path, capsys):
    path = tmp_path / "run.json"
    outputs = []
    for _ in range(2):
        code, _, _ = run(capsys, "simulate", "--p", "0.3", "--n", "12", "--u", "0.8",
                         "--samples", "20000", "--seed", "99", "--out", str(path))
        assert code == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\np = 0.2\nformat = csv\n")
    code, out, _ = run(capsys, "--config", str(cfg), "norm")
    assert code == 0 and out.startswith("# tool=binarytails")
    assert "# config p=0.20000000000000001" in out
    cfg.write_text("bogus = 1\n")
    code, _, _ = run(capsys, "--config", str(cfg), "norm", "--p", "0.5")
    assert code == 2


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "binarytails", "norm", "--p", "0.5", "--format", "csv"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.splitlines()[-1].startswith("0.5,1.0000000000")
