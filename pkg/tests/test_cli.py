import json
import subprocess
import sys

import pytest

from grouphier import cli, theorems
from grouphier.export import from_json, to_json
from grouphier.families import LocallyDihedralTrunc
from grouphier.graphs import decomposition_signature, DecompositionSignature


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- graph --


def test_graph_json_genq(capsys):
    code, out, _ = run(capsys, "graph", "pow:genq:3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "pow" and data["family"] == "genq:3"
    assert len(data["vertices"]) == 16
    assert data["edges"] == sorted(data["edges"])
    assert all(i < j for i, j in data["edges"])
    assert decomposition_signature(from_json(out)) == DecompositionSignature(2, (6, 2, 2, 2, 2))


def test_graph_csv_complete(capsys):
    code, out, _ = run(capsys, "graph", "epow:cyclic:6", "--format", "csv")
    assert code == 0
    assert len(out.splitlines()) == 15
    assert out.splitlines()[0] == "0,1"


def test_graph_dot_identity_degree(capsys):
    code, out, _ = run(capsys, "graph", "com:dinf:0..3", "--format", "dot")
    assert code == 0
    assert out.startswith('graph "com:dinf:0..3" {')
    edges = [line for line in out.splitlines() if " -- " in line]
    assert sum('"r(0)"' in e for e in edges) == 7
    _, csv, _ = run(capsys, "graph", "com:dinf:0..3", "--format", "csv")
    labels = [f"r({i})" for i in range(4)] + [f"r({i})*t" for i in range(4)]
    pairs = [tuple(map(int, line.split(","))) for line in csv.splitlines()]
    assert edges == [f'  "{labels[i]}" -- "{labels[j]}";' for i, j in pairs]


@pytest.mark.parametrize("spec", ["pow:genq:3", "com:dicyclic:5", "epow:qinf:default", "pow:prod(cyclic:2,dihedral:3)"])
def test_json_round_trip(capsys, spec):
    _, out, _ = run(capsys, "graph", spec)
    assert to_json(from_json(out)) == out


@pytest.mark.parametrize(
    "argv",
    [
        ["graph", "nope"],
        ["graph", "foo:cyclic:3"],
        ["graph", "pow:cyclic:x"],
        ["graph", "pow:genq:1"],
        ["graph", "pow:dinf:1..3"],
        ["graph", "pow:genq:12"],
    ],
)
def test_graph_parse_and_guard_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err.startswith("error:")


def test_graph_level_cap_override(capsys):
    code, _, err = run(capsys, "graph", "pow:lq:4", "--level-cap", "3", "--format", "csv")
    assert code == 2 and "resource guard" in err
    code, _, _ = run(capsys, "graph", "pow:lq:4", "--level-cap", "4", "--format", "csv")
    assert code == 0


def test_graph_build_error(capsys, monkeypatch):
    from grouphier.errors import NotClosedError

    def broken(spec):
        raise NotClosedError("corrupted family table")

    monkeypatch.setattr(cli, "build_family", broken)
    code, _, err = run(capsys, "graph", "pow:cyclic:4")
    assert code == 3
    assert "corrupted family table" in err


def test_graph_out_file_and_env_dir(capsys, tmp_path, monkeypatch):
    target = tmp_path / "a.json"
    assert run(capsys, "graph", "pow:cyclic:4", "--out", str(target))[0] == 0
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path / "outdir"))
    code, out, _ = run(capsys, "graph", "pow:cyclic:4", "--out", "b.json")
    assert code == 0 and out == ""
    assert (tmp_path / "outdir" / "b.json").read_text() == target.read_text()


# -- check --


def test_check_pow_epow_equality_on_cyclic_six(capsys):
    code, out, _ = run(capsys, "check", "thm1", "cyclic:6")
    assert code == 0
    assert "graphs equal: False" in out
    assert "CPQ" in out


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", "thm2", "prod(cyclic:3,cyclic:3)", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["obstruction"]["kind"] == "CPP" and d["consistent"]


def test_check_levels(capsys):
    assert run(capsys, "check", "thm4", "--level", "4")[0] == 0
    assert run(capsys, "check", "thm5", "--level", "3")[0] == 0
    assert run(capsys, "check", "cor32", "--level", "3")[0] == 0
    assert run(capsys, "check", "cor34", "--level", "3")[0] == 0
    assert run(capsys, "check", "chain", "--chain", "ld", "--kind", "com", "--level", "3")[0] == 0
    code, out, _ = run(capsys, "check", "prop33")
    assert code == 0 and "STRICT" in out


def test_check_qinf_strictness_insufficient_window(capsys, tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("0\n1/2\n1/4\n")
    code, out, _ = run(capsys, "check", "prop33", f"qinf:@{f}")
    assert code == 1
    assert "NOT_WITNESSED" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "thm5", "--level", "9999"],
        ["check", "thm4"],
        ["check", "thm4", "--level", "1"],
        ["check", "thm1"],
        ["check", "thm1", "dinf:0..3"],
        ["check", "thm1", "nope:1"],
        ["check", "prop33", "cyclic:3"],
    ],
)
def test_check_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_check_guard_message(capsys):
    _, _, err = run(capsys, "check", "thm5", "--level", "9999")
    assert "resource guard" in err


def test_check_failure_exit(capsys, monkeypatch):
    monkeypatch.setitem(theorems.CHAINS, "lq", LocallyDihedralTrunc)
    code, out, _ = run(capsys, "check", "cor32", "--level", "3")
    assert code == 1
    assert json.loads(out)["passed"] is False


# -- suite --


def test_suite_smallest(capsys):
    code, out, _ = run(capsys, "suite", "--max-level", "2")
    assert code == 0
    assert out.rstrip().splitlines()[-1].endswith("PASS")


def test_suite_json(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, _, _ = run(capsys, "suite", "--max-level", "2", "--format", "json", "--out", str(target))
    assert code == 0
    report = json.loads(target.read_text())
    assert report["passed"] and report["n_failed"] == 0
    assert {r["criterion"] for r in report["rows"]} == set(range(1, 11))


def test_suite_corrupted_table(capsys, monkeypatch):
    monkeypatch.setitem(theorems.CHAINS, "lq", LocallyDihedralTrunc)
    code, _, err = run(capsys, "suite", "--max-level", "2")
    assert code == 1
    assert "FAILED: criterion 1 cor32.lq" in err


def test_suite_level_bounds(capsys):
    assert run(capsys, "suite", "--max-level", "1")[0] == 2
    assert run(capsys, "suite", "--max-level", "11")[0] == 2


# -- determinism and entry points --


def test_graph_output_is_byte_identical(capsys):
    outs = {run(capsys, "graph", "com:qinf:default", "--format", "dot")[1] for _ in range(3)}
    assert len(outs) == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "grouphier", "graph", "pow:cyclic:4", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    # every pair in C4 is related by powers: 1/2 = 2 * 1/4 and 3/4 = 3 * 1/4
    assert proc.stdout == "0,1\n0,2\n0,3\n1,2\n1,3\n2,3\n"
