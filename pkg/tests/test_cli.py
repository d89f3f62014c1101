from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from wilfcollapse.cli import run

CLASSES = Path(__file__).resolve().parent.parent / "classes"
LAYERED = str(CLASSES / "layered2.json")
POLY = str(CLASSES / "poly.json")
ABSTRACT = str(CLASSES / "abstract.json")


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_wilf_json(capsys):
    code, out, err = call(capsys, "wilf", "--class", LAYERED, "--size", "3", "--max", "14")
    assert code == 0
    assert json.loads(out) == {"k": 3, "c": 3, "w": 2, "exact": False, "blocks": [["123"], ["132", "213"]]}
    assert "provisional" in err


def test_wilf_default_horizon_is_exact(capsys):
    code, out, _ = call(capsys, "wilf", "--class", LAYERED, "--size", "4")
    d = json.loads(out)
    assert code == 0 and d["exact"] and d["blocks"] == [["1234"], ["1243", "1324", "2134"], ["2143"]]


def test_collapse_csv(capsys):
    code, out, _ = call(capsys, "wilf", "--class", POLY, "--size", "3..5", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "k,c_k,w_k,ratio,mean_block,exact"
    assert lines[1].startswith("3,3,2,")


def test_growth(capsys):
    code, out, _ = call(capsys, "growth", "--class", POLY, "--max", "8")
    d = json.loads(out)
    assert d["gamma"] == 1.0 and d["D"] == 2
    assert [r["c_n"] for r in d["counts"]] == list(range(1, 9))


def test_count(capsys):
    code, out, _ = call(capsys, "count", "--class", LAYERED, "--max", "6", "--format", "csv")
    assert out.splitlines() == ["n,c_n", "1,1", "2,2", "3,3", "4,5", "5,8", "6,13"]
    code, out, _ = call(capsys, "count", "--class", LAYERED, "--max", "6")
    assert [r["c_n"] for r in json.loads(out)["counts"]] == [1, 2, 3, 5, 8, 13]


def test_series_and_avoid(capsys):
    code, out, _ = call(capsys, "series", "--class", LAYERED, "--pattern", "21.1", "--max", "6")
    d = json.loads(out)
    assert code == 0 and d["quotient_identity"] and d["I_star"][3] == 1
    code, out, _ = call(capsys, "avoid", "--class", LAYERED, "--pattern", "132", "--max", "5", "--format", "csv")
    assert out.splitlines() == ["n,a_n", "3,2", "4,2", "5,2"]


def test_orbits(capsys):
    code, out, _ = call(capsys, "orbits", "--class", POLY, "--size", "4")
    d = json.loads(out)
    assert code == 0 and d["violations"] == [] and d["checks"]["move-waived"] == 3


def test_automaton_and_validate(capsys):
    code, out, _ = call(capsys, "automaton", "--class", ABSTRACT)
    assert code == 0 and json.loads(out)["D"] == 2
    code, out, _ = call(capsys, "validate", "--class", POLY, "--max", "4")
    assert code == 0 and json.loads(out)["counts_match_brute_force"]


def test_randomized_commands_are_reproducible(capsys, tmp_path):
    args = ["sample", "--class", POLY, "--size", "12", "--samples", "20", "--seed", "5", "--format", "csv"]
    _, first, _ = call(capsys, *args)
    _, second, _ = call(capsys, *args)
    assert first == second and first.startswith("# seed=5\nword,perm\n")
    _, out, _ = call(capsys, "sample", "--class", LAYERED, "--size", "6", "--samples", "3")
    assert json.loads(out)["seed"] == 0
    target = tmp_path / "stats.csv"
    code, out, _ = call(capsys, "stats", "--class", LAYERED, "--size", "30", "--samples", "10",
                        "--pattern", "1.21.1", "--format", "csv", "--out", str(target))
    text = target.read_text()
    assert code == 0 and out == "" and text.splitlines()[1] == "statistic,n,samples,value"
    assert "# histogram blocks[1.21.1]" in text


@pytest.mark.parametrize("argv", [
    ["bogus", "--class", LAYERED],
    ["count", "--class", "missing.json", "--max", "3"],
    ["count", "--class", LAYERED],
    ["avoid", "--class", POLY, "--pattern", "321", "--max", "5"],
    ["wilf", "--class", LAYERED, "--size", "x"],
    ["count", "--class", LAYERED, "--max", "3", "--format", "xml"],
    [],
])
def test_input_errors_exit_1(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 1
    assert err.count("\n") == 1 and err.startswith("error:")


def test_malformed_spec(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "alphabet", "letters": ["1", "231"]}')
    code, _, err = call(capsys, "count", "--class", str(bad), "--max", "3")
    assert code == 1 and "down-closed" in err


def test_internal_failure_exit_2(capsys, monkeypatch):
    import wilfcollapse.cli as cli

    def boom(model, args):
        raise AssertionError("broken invariant")

    monkeypatch.setitem(cli.HANDLERS, "count", boom)
    code, _, err = call(capsys, "count", "--class", LAYERED, "--max", "3")
    assert code == 2 and "broken invariant" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "wilfcollapse", "count", "--class", LAYERED, "--max", "4",
                          "--format", "csv"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.splitlines()[-1] == "4,5"
