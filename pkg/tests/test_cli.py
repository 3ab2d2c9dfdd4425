import csv
import io
import json

import pytest

from lmestates.cli import dispatch, main
from lmestates.tensor import is_lme, read_state


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_exists_json(capsys):
    code, out, err = run(capsys, "exists", "2x2x2")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "exists"
    assert doc["exit_code"] == 0
    assert doc["output"]["exists"] is True
    assert doc["output"]["R"] == 4
    assert err == ""


def test_exists_empty_case():
    res = dispatch(["exists", "2,2,5"])
    assert res.exit_code == 0
    assert res.output["exists"] is False
    assert res.output["exists_by_R"] is False


def test_dim_reports_trichotomy():
    out = dispatch(["dim", "2x6x6"]).output
    assert out["dim_complex"] == 3
    assert out["dim_real"] == 6
    assert out["trichotomy"] == {"exists": True, "dim_complex": 3}


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--a", "2", "--bmax", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0].keys() >= {"A", "B", "C", "status"}
    assert len(rows) == sum(b + 1 for b in range(2, 5))
    assert {r["status"] for r in rows} >= {"empty", "gmax-case"}


def test_scan_json():
    out = dispatch(["scan", "--a", "3", "--bmax", "4"]).output
    assert out["rows"][0]["A"] == 3


def test_sporadic():
    out = dispatch(["sporadic", "--a", "3", "--max-dim", "30"]).output
    assert [2, 2] in out["seed_set"]
    assert [3, 8, 21] in out["triples"]


def test_construct_then_verify(tmp_path):
    path = tmp_path / "w.state"
    res = dispatch(["construct", "3j", "--dims", "2x3x4", "-o", str(path)])
    assert res.exit_code == 0
    assert res.output["lme"] is True
    assert is_lme(read_state(path))[0]
    ver = dispatch(["verify", str(path)])
    assert ver.output["lme"] is True
    assert ver.output["dims"] == "2x3x4"


@pytest.mark.parametrize(
    "args",
    [
        ["bell", "--d", "3"],
        ["ghz", "--d", "2", "--parties", "4"],
        ["vec2bb", "--b", "5"],
        ["2n-np1", "--n", "3"],
        ["2n-np1", "--n", "2", "--k", "2"],
        ["pauli", "--six-qubit"],
    ],
)
def test_construct_kinds(tmp_path, args):
    res = dispatch(["construct", *args, "-o", str(tmp_path / "s.state")])
    assert res.exit_code == 0, res.output
    assert res.output["lme"] is True


def test_construct_from_files(tmp_path):
    grid = tmp_path / "grid.txt"
    grid.write_text("1 2 3\n2 3 1\n3 1 2\n")
    res = dispatch(["construct", "sudoku", "--grid", str(grid), "-o", str(tmp_path / "s.state")])
    assert res.output["lme"] is True
    gens = tmp_path / "gens.txt"
    gens.write_text("ZZ\nXX\n")
    res = dispatch(["construct", "pauli", "--generators", str(gens), "-o", str(tmp_path / "p.state")])
    assert res.output["lme"] is True
    vecs = tmp_path / "v.txt"
    vecs.write_text("0 0 1\n0 0 -1\n")
    res = dispatch(["construct", "vec2bb", "--vectors", str(vecs), "-o", str(tmp_path / "v.state")])
    assert res.output["lme"] is True


def test_verify_m_uniform(tmp_path):
    path = tmp_path / "e8.state"
    dispatch(["construct", "pauli", "--six-qubit", "-o", str(path)])
    assert dispatch(["verify", str(path), "--m", "3", "--tol", "1e-10"]).output["m_uniform"] is True
    assert dispatch(["verify", str(path), "--m", "4", "--tol", "1e-10"]).output["m_uniform"] is False


def test_flow_random_is_seeded(tmp_path):
    a = dispatch(["flow", "--random", "2x2x2", "--seed", "5"]).output
    b = dispatch(["--seed", "5", "flow", "--random", "2x2x2"]).output
    assert a == b
    assert a["classification"] == "Semistable"
    report = tmp_path / "r.json"
    end = tmp_path / "end.state"
    dispatch(["flow", "--random", "2x2x2", "--report", str(report), "-o", str(end)])
    assert json.loads(report.read_text())["classification"] == "Semistable"
    assert is_lme(read_state(end), 1e-7)[0]


def test_flow_from_file(tmp_path):
    path = tmp_path / "w.state"
    path.write_text("dims: 2x2x2\n2 1 1 1.0 0.0\n1 2 1 1.0 0.0\n1 1 2 1.0 0.0\n")
    out = dispatch(["flow", str(path)]).output
    assert out["classification"] == "Unstable"


def test_stab_dim():
    out = dispatch(["stab-dim", "3x3x3", "--jobs", "1"]).output
    assert out["dim_s"] == 0 and out["quotient_dim"] == 2
    assert dispatch(["stab-dim", "2x2x2", "--method", "svd"]).output["method"] == "NumericSVD"


def test_group_commands(tmp_path):
    res = dispatch(["group-state", "--family", "ut3p", "--p", "3", "-o", str(tmp_path / "g.state")])
    assert res.exit_code == 0 and res.output["lme"] is True
    assert dispatch(["group-state", "--family", "s3-ghz"]).output["lme"] is True
    assert dispatch(["group-info", "--p", "5"]).output["order"] == 250


@pytest.mark.parametrize(
    "argv,code,kind",
    [
        (["exists", "2xq"], 2, "usage"),
        ([], 2, "usage"),
        (["nonsense"], 2, "usage"),
        (["construct", "bell", "-o", "x.state"], 2, "domain"),
        (["construct", "3j", "--dims", "2x2x2", "-o", "x.state"], 2, "domain"),
        (["verify", "/nonexistent/file.state"], 2, "io"),
        (["group-state", "--dims", "2x4x4"], 2, "domain"),
        (["stab-dim", "8x8x8", "--cap", "100"], 3, "resource"),
        (["sporadic", "--a", "1", "--max-dim", "5"], 2, "domain"),
    ],
)
def test_error_exit_codes(argv, code, kind, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    res = dispatch(argv)
    assert res.exit_code == code
    assert res.output["type"] == kind


def test_main_reports_errors_on_stderr(capsys):
    code, out, err = run(capsys, "stab-dim", "8x8x8", "--cap", "100")
    assert code == 3
    assert json.loads(out)["exit_code"] == 3
    assert "cap" in err


def test_jobs_from_environment(monkeypatch):
    monkeypatch.setenv("LME_JOBS", "2")
    assert dispatch(["exists", "2x2x2"]).inputs["jobs"] == 2
    monkeypatch.setenv("LME_JOBS", "bogus")
    assert dispatch(["exists", "2x2x2"]).inputs["jobs"] == 1


def test_pretty_output(capsys):
    _, out, _ = run(capsys, "exists", "2x2", "--pretty")
    assert out.startswith("{\n  ")


def test_documented_examples(tmp_path):
    out = dispatch(["dim", "2x4x4"]).output
    assert (out["dim_complex"], out["dim_real"]) == (1, 2)
    out = dispatch(["exists", "2x2x5"]).output
    assert out["exists"] is False and out["R"] == -8
    path = tmp_path / "ghz.state"
    dispatch(["construct", "ghz", "--d", "2", "--parties", "3", "-o", str(path)])
    ver = dispatch(["verify", str(path)]).output
    assert ver["lme"] is True and ver["deviation"] < 1e-12


def test_help_exits_cleanly(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["stab-dim", "--help"])
    assert exc.value.code == 0
    assert "usage: lme stab-dim" in capsys.readouterr().out
