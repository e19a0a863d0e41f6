import json
import os
import subprocess
import sys

import pytest

from qloop.cli import main


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


@pytest.fixture
def mats(tmp_path):
    return {
        "E": write(tmp_path, "E.json", {"n": 2, "entries": [[1, 2, 1]]}),
        "F": write(tmp_path, "F.json", {"n": 2, "entries": [[2, 1, 1]]}),
        "G": write(tmp_path, "G.json", {"n": 2, "entries": [[1, 2, 1], [1, 1, 1]]}),
        "H": write(tmp_path, "H.json", {"n": 2, "entries": [[1, 2, 1], [2, 2, 1]]}),
        "K": write(tmp_path, "K.json", {"n": 2, "entries": [[1, 2, 1], [2, 1, 1]]}),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hall(capsys, mats):
    code, out, _ = run(capsys, "hall", mats["E"], mats["E"])
    assert code == 0
    data = json.loads(out)
    assert data["product"] == [{"coeff": "v + v^-1", "matrix": [[1, 2, 2]]}]


def test_schur_mul(capsys, mats):
    code, out, _ = run(capsys, "schur-mul", mats["G"], mats["H"], "--r", "2")
    assert code == 0
    assert json.loads(out)["product"] == [{"coeff": "v + v^-1", "matrix": [[1, 2, 2]]}]


def test_canon(capsys, mats):
    code, out, _ = run(capsys, "canon", mats["K"])
    assert json.loads(out)["theta"] == [{"coeff": "v^-1", "matrix": [[1, 1, 1], [2, 2, 1]]},
                                        {"coeff": "1", "matrix": [[1, 2, 1], [2, 1, 1]]}]


def test_stab_mul(capsys, mats):
    code, out, _ = run(capsys, "stab-mul", mats["F"], mats["E"], "--check-p", "3")
    data = json.loads(out)
    assert [s["p"] for s in data["specializations"]] == [2, 3, 4]
    assert all(s["agrees"] for s in data["specializations"])
    assert data["at_w_equal_1"] == [{"coeff": "1", "matrix": [[2, 2, 1]]},
                                    {"coeff": "1", "matrix": [[1, 1, -1], [1, 2, 1], [2, 1, 1]]}]


def test_canon_k_and_loop(capsys, mats):
    code, out, _ = run(capsys, "canon-k", mats["K"])
    assert len(json.loads(out)["theta"]) == 2
    code, out, _ = run(capsys, "loop-mul", mats["E"], mats["F"], "--r", "2")
    data = json.loads(out)
    assert data["truncation"]["r"] == 2
    assert {"coeff": "1", "matrix": [[1, 2, 1], [2, 1, 1]]} in data["truncation"]["terms"]


def test_lusztig_check(capsys):
    code, out, _ = run(capsys, "lusztig-check", "--max-norm", "1", "--r-max", "1")
    data = json.loads(out)
    assert code == 0 and data["summary"]["total"] == len(data["entries"]) > 0


def test_verify_suite(capsys):
    code, out, err = run(capsys, "verify", "bar")
    assert code == 0
    assert "criterion  5 [bar] PASS" in err
    assert json.loads(out)["suites"][0]["passed"] is True


def test_output_file(capsys, mats, tmp_path):
    target = tmp_path / "out.json"
    run(capsys, "hall", mats["E"], mats["E"], "-o", str(target))
    assert json.loads(target.read_text())["basis"] == "tight"


@pytest.mark.parametrize("content,needle", [
    ('{"n": 2, "entries":', "line 1"),
    ('{"n": 2}', "missing field 'entries'"),
    ('{"n": 2, "entries": [[1, 2]]}', "field 'entries'"),
    ('[1, 2]', "expected an object"),
])
def test_malformed_input(capsys, tmp_path, mats, content, needle):
    bad = write(tmp_path, "bad.json", content)
    code, out, err = run(capsys, "hall", bad, mats["E"])
    assert code == 2 and out == ""
    assert needle in err


@pytest.mark.parametrize("argv,needle", [
    (["--n", "5"], "--n must lie in [2, 4]"),
    (["--max-dim", "9"], "--max-dim must lie in [0, 6]"),
    (["--band", "7"], "--band"),
])
def test_caps_refused(capsys, mats, argv, needle):
    code, _, err = run(capsys, "hall", mats["E"], mats["E"], *argv)
    assert code == 2 and needle in err


def test_dimension_cap(capsys, tmp_path, mats):
    big = write(tmp_path, "big.json", {"n": 2, "entries": [[1, 2, 3]]})
    code, _, err = run(capsys, "hall", big, big, "--max-dim", "2")
    assert code == 2 and "exceeds --max-dim" in err


def test_wrong_n(capsys, mats):
    code, _, err = run(capsys, "canon", mats["K"], "--n", "3")
    assert code == 2 and "--n is 3" in err


def test_byte_identical_runs(mats):
    cmd = [sys.executable, "-m", "qloop.cli", "stab-mul", mats["F"], mats["E"], "--check-p", "2"]
    outs = [subprocess.run(cmd, capture_output=True, check=True, env=dict(os.environ, PYTHONHASHSEED=seed)).stdout
            for seed in ("1", "2")]
    assert outs[0] == outs[1] and outs[0]
