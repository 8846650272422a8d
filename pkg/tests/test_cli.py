import json

import pytest

from nahmsolve import cli

E2 = {"points": [[1, 0, 0], [-1, 0, 0]], "s_grid": {"start": 0.5, "stop": 2, "count": 3}}


@pytest.fixture
def cfg_path(tmp_path):
    def make(data=E2):
        p = tmp_path / "run.json"
        p.write_text(json.dumps(data))
        return str(p)
    return make


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_json(cfg_path, capsys):
    code, out, _ = run(capsys, "solve", "--config", cfg_path())
    assert code == 0
    recs = json.loads(out)["records"]
    assert [r["s"] for r in recs] == [0.5, 1.25, 2.0]
    assert all(r["report"]["within_tolerance"] for r in recs)


def test_solve_deterministic(cfg_path, tmp_path, capsys):
    outs = []
    path = str(tmp_path / "o.json")
    for _ in range(2):
        assert run(capsys, "solve", "--config", cfg_path(), "--out", path)[0] == 0
        outs.append(open(path, "rb").read())
    assert outs[0] == outs[1]


def test_workers_same_output(cfg_path, capsys):
    a = run(capsys, "solve", "--config", cfg_path())[1]
    b = run(capsys, "solve", "--config", cfg_path({**E2, "workers": 3}))[1]
    strip = lambda t: json.loads(t)["records"]
    assert strip(a) == strip(b)


def test_csv_and_timing(cfg_path, capsys):
    code, out, _ = run(capsys, "solve", "--config", cfg_path(), "--format", "csv", "--s", "1")
    assert code == 0 and len(out.splitlines()) == 2
    code, out, _ = run(capsys, "solve", "--config", cfg_path(), "--s", "1", "--timing")
    assert "wall_time" in json.loads(out)["records"][0]


def test_verify(cfg_path, capsys):
    code, out, _ = run(capsys, "verify", "--config", cfg_path(), "--s", "1")
    assert code == 0
    d = json.loads(out)
    assert d["reports"][0]["within_tolerance"] and "casimir_residual" in d["boundary"]


def test_verify_flags_failure(cfg_path, capsys):
    tight = {**E2, "tolerances": {"gram": 1e-300}}
    code, out, _ = run(capsys, "verify", "--config", cfg_path(tight), "--s", "1")
    assert code in (0, 2)
    rep = json.loads(out)["reports"][0]
    assert code == (0 if rep["within_tolerance"] else 2)


def test_basis_both(cfg_path, capsys):
    code, out, _ = run(capsys, "basis", "--config", cfg_path({**E2, "solver": "both"}),
                       "--s", "1")
    assert code == 0
    assert json.loads(out)["bases"][0]["solver_agreement"] <= 1e-8


def test_perturb(cfg_path, capsys):
    code, out, _ = run(capsys, "perturb", "--config", cfg_path(), "--order", "2", "--s", "3")
    assert code == 0
    assert json.loads(out)["max_error_vs_exact"] < 1e-6
    assert run(capsys, "perturb", "--config", cfg_path(), "--order", "-1")[0] == 1


def test_zeromode(cfg_path, capsys):
    code, out, _ = run(capsys, "zeromode", "--config", cfg_path(), "--s", "1",
                       "--x", "0.3,0.4,1.2")
    assert code == 0
    modes = json.loads(out)["zero_modes"]
    assert len(modes) == 2 and all(m["residual"] <= 1e-4 for m in modes)
    code, _, err = run(capsys, "zeromode", "--config", cfg_path(), "--s", "1", "--x", "1,0,0")
    assert code == 1 and json.loads(err)["error"] == "AtSource"


def test_oracle(cfg_path, capsys):
    code, out, err = run(capsys, "oracle", "--config", cfg_path())
    assert code == 0 and json.loads(out)["max_deviation"] <= 1e-9
    assert err.startswith("max deviation")


@pytest.mark.parametrize("data,code", [
    ({"points": [[0, 0, 0], [0, 0, 0]]}, 1),
    ({"points": [[0, 0, 0]], "solver": "x"}, 1),
])
def test_input_errors(cfg_path, capsys, data, code):
    c, _, err = run(capsys, "solve", "--config", cfg_path(data))
    assert c == code and json.loads(err)["exit_code"] == code


def test_io_errors(cfg_path, tmp_path, capsys):
    assert run(capsys, "solve", "--config", str(tmp_path / "none.json"))[0] == 3
    assert run(capsys, "solve", "--config", cfg_path(), "--out",
               str(tmp_path / "no" / "dir" / "o.json"))[0] == 3
