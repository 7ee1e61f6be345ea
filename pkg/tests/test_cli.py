import csv
import io
import json
import subprocess
import sys

import pytest

import wallwalk.genfun as genfun
from wallwalk.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_dp_example(capsys):
    code, out, _ = run(["dp", "--delta", "1.5", "--x0", "0", "--n", "2"], capsys)
    assert code == 0
    table = rows(out)
    assert table[0] == ["y", "prob"]
    assert [r[0] for r in table[1:]] == ["0", "2"]
    assert float(table[1][1]) == pytest.approx(5 / 7, abs=1e-15)
    assert float(table[2][1]) == pytest.approx(2 / 7, abs=1e-15)


def test_floats_round_trip(capsys):
    _, out, _ = run(["stationary", "--delta", "1.5", "--max-site", "5"], capsys)
    for r in rows(out)[1:]:
        assert "%.17g" % float(r[1]) == r[1]


def test_dp_rejects_small_delta(capsys):
    code, out, err = run(["dp", "--delta", "0.5", "--n", "2"], capsys)
    assert code == 2
    assert out == ""
    assert "delta > 1" in err


def test_subcritical_only(capsys):
    code, _, err = run(["kdelta", "--delta", "2.5"], capsys)
    assert code == 2 and "1 < delta < 2" in err


def test_kdelta_json(capsys):
    code, out, _ = run(["kdelta", "--delta", "1.5", "--nodes", "512"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert set(obj) == {"delta", "k_delta", "nodes", "converged"}
    assert obj["delta"] == 1.5 and obj["nodes"] == 512 and obj["converged"] is True
    assert obj["k_delta"] > 0


@pytest.mark.parametrize("nodes", ["100", "32", "8192", "abc"])
def test_nodes_validation(nodes, capsys):
    code, _, err = run(["ortho", "--nodes", nodes], capsys)
    assert code == 2 and ("power of two" in err or "invalid" in err)


def test_seed_required(capsys):
    code, _, err = run(["mc", "--n", "10"], capsys)
    assert code == 2 and "--seed" in err


def test_mc_deterministic_across_workers(capsys):
    base = ["mc", "--n", "20", "--paths", "70000", "--seed", "7"]
    _, one, _ = run(base + ["--workers", "1"], capsys)
    _, two, _ = run(base + ["--workers", "2"], capsys)
    assert one == two
    assert json.loads(run(base + ["--format", "json"], capsys)[1])["seed"] == 7


@pytest.mark.parametrize("argv", [
    ["dp", "--n", "50", "--means"],
    ["polys", "--family", "QStar1", "--max-degree", "6"],
    ["transition", "--n", "30"],
    ["asymz", "--z", "0.9,0.99"],
])
def test_byte_identical(argv, capsys):
    assert run(argv, capsys) == run(argv, capsys)


def test_output_file(tmp_path, capsys):
    path = tmp_path / "pi.csv"
    code, out, _ = run(["stationary", "--max-site", "3", "--output", str(path)], capsys)
    assert code == 0 and out == ""
    assert rows(path.read_text())[0] == ["y", "pi"]


@pytest.mark.parametrize("cmd", ["ortho", "transition --n 40", "dette", "genfun --z 0.3,0.9"])
def test_verification_subcommands_pass(cmd, capsys):
    code, out, _ = run(cmd.split(), capsys)
    assert code == 0 and out


def test_tolerance_failure_exit(capsys):
    code, _, _ = run(["ortho", "--tol", "1e-30"], capsys)
    assert code == 1


def test_asym_table(capsys):
    code, out, _ = run(["asym", "--n-list", "64,128,256", "--format", "json"], capsys)
    obj = json.loads(out)
    assert code == 0 and len(obj["rows"]) == 3
    code, _, _ = run(["asym", "--n-list", "63"], capsys)
    assert code == 2


def test_verify_all(capsys):
    code, out, err = run(["verify-all", "--delta", "1.5"], capsys)
    assert code == 0, err
    assert all(r[3] == "pass" for r in rows(out)[1:])


def test_verify_all_catches_sign_error(monkeypatch, capsys):
    original = genfun.b_coefficient

    def flipped(delta, t, omt, u):
        # sign error on the 2t(1-u)^2 term
        return original(delta, t, omt, u) + 4.0 * t * (1.0 - u) ** 2

    monkeypatch.setattr(genfun, "b_coefficient", flipped)
    code, out, err = run(["verify-all", "--delta", "1.5"], capsys)
    assert code == 1
    assert "FAIL" in out and "failed" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wallwalk", "dp", "--n", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["y,prob", "1,1"]
