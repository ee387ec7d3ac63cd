import csv
import io
import json
import subprocess
import sys

import pytest

from wci.cli import main
from wci.constructors import zn

Z6 = '{"kind":"zn","n":6}'
M2 = '{"kind":"matrix","base":{"kind":"zn","n":2},"k":2}'


def run(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_index_z6():
    code, out, _ = run("index", "--spec", Z6, "--json")
    data = json.loads(out)
    assert code == 0
    assert data["win"] == 2 and data["in"] == 2 and data["order"] == 6
    assert data["argmax"] == 1
    assert list(data) == sorted(data)


def test_chi_z4():
    code, out, _ = run("chi", "--spec", '{"kind":"zn","n":4}', "--element", "2")
    data = json.loads(out)
    assert code == 0
    assert data["members"] == [1]
    assert data["witnesses"] == [{"idempotent": 1, "unit": "both"}]


def test_chi_by_label():
    code, out, _ = run("chi", "--spec", '{"kind":"triangular","a":{"kind":"zn","n":2},"b":{"kind":"zn","n":2},'
                       '"m":{"order":2,"add":[[0,1],[1,0]],"left":[[0,0],[0,1]],"right":[[0,0],[0,1]]}}',
                       "--element", "[0,0,1]")
    assert code == 0 and json.loads(out)["size"] == 2


def test_chi_symbolic():
    code, out, _ = run("chi", "--spec", '{"kind":"symbolic_t3"}', "--element", "[0,0,1]")
    data = json.loads(out)
    assert code == 0 and data["members"] == [[1, 0, 0], [1, 1, 0], [1, 2, 0]]


def test_info():
    code, out, _ = run("info", "--spec", Z6)
    data = json.loads(out)
    assert code == 0
    assert data["units"] == [1, 5] and data["idempotents"] == [0, 1, 3, 4]
    assert data["jacobson_radical"] == [0] and data["center"] == list(range(6))
    assert data["abelian"] is True and data["local"] is False
    code, out, _ = run("info", "--spec", '{"kind":"symbolic_t3"}')
    assert code == 0 and len(json.loads(out)["idempotents"]) == 8


def test_spec_file_and_stdin(tmp_path, monkeypatch):
    path = tmp_path / "z6.json"
    path.write_text(Z6)
    assert json.loads(run("index", "--spec-file", str(path))[1])["win"] == 2
    assert json.loads(run("index", "--spec", "-", stdin=Z6, monkeypatch=monkeypatch)[1])["win"] == 2


def test_malformed_json_exit_2():
    code, out, err = run("index", "--spec", '{"kind":"zn",')
    assert code == 2 and out == ""
    assert "line 1 column" in err and "char" in err


def test_invalid_input_exit_2():
    assert run("index", "--spec", '{"kind":"zn","n":0}')[0] == 2
    assert run("index")[0] == 2
    assert run("index", "--spec", '{"kind":"symbolic_t3"}')[0] == 2
    assert run("chi", "--spec", Z6, "--element", "9")[0] == 2
    assert run("chi", "--spec", Z6)[0] == 2
    assert run("verify", "--suite", "nope")[0] == 2
    assert run("bogus")[0] == 2
    assert run("index", "--spec", '{"kind":"matrix","base":{"kind":"zn","n":2},"k":5}')[0] == 2
    assert run("index", "--spec", M2, "--size-cap", "8")[0] == 2


def test_verify_exit_codes():
    assert run("verify", "--suite", "lemma-basic")[0] == 0
    assert run("verify", "--suite", "classification")[0] == 0
    code, out, _ = run("verify", "--suite", "all")
    data = json.loads(out)
    assert code == 1
    failing = {(r["suite"], r["check"]) for r in data["results"] if r["outcome"] == "fail"}
    assert failing == {("jset-bijection", "jset-cardinality")}
    assert "elapsed_ms" not in data


def test_verify_sabotaged_catalog(tmp_path):
    z4 = zn(4)
    mul = z4.mul_table.tolist()
    mul[2][2] = 1
    path = tmp_path / "cat.json"
    path.write_text(json.dumps([{"name": "Z_4 bad", "spec": {
        "kind": "table", "order": 4, "one": 1, "add": z4.add_table.tolist(), "mul": mul}}]))
    code, out, _ = run("verify", "--suite", "lemma-basic", "--catalog", str(path))
    data = json.loads(out)
    assert code == 1
    (fail,) = data["results"]
    assert fail["outcome"] == "fail" and fail["witness"]["violations"]


def test_seed_env_and_flag(monkeypatch):
    monkeypatch.setenv("WCI_SEED", "99")
    data = json.loads(run("verify", "--suite", "theorem3-witness", "--samples", "50")[1])
    assert data["seed"] == 99
    data = json.loads(run("verify", "--suite", "theorem3-witness", "--samples", "50", "--seed", "5")[1])
    assert data["seed"] == 5
    monkeypatch.setenv("WCI_SEED", "x")
    assert run("verify", "--suite", "theorem3-witness")[0] == 2


def test_timing_flag():
    data = json.loads(run("verify", "--suite", "classification", "--timing")[1])
    assert isinstance(data["elapsed_ms"], int)


def test_csv_matches_json():
    _, j, _ = run("index", "--spec", Z6, "--json")
    _, c, _ = run("index", "--spec", Z6, "--format", "csv")
    (row,) = list(csv.DictReader(io.StringIO(c)))
    data = json.loads(j)
    assert set(row) == set(data)
    for key, value in data.items():
        assert row[key] == str(value)


def test_csv_search_and_verify():
    _, j, _ = run("search")
    _, c, _ = run("search", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(c)))
    data = json.loads(j)
    assert [r["ring"] for r in rows] == [r["ring"] for r in data["rows"]]
    assert [int(r["win"]) for r in rows] == [r["win"] for r in data["rows"]]
    _, j, _ = run("verify", "--suite", "classification")
    _, c, _ = run("verify", "--suite", "classification", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(c)))
    results = json.loads(j)["results"]
    assert [json.loads(r["witness"]) for r in rows] == [r["witness"] for r in results]


def test_search_and_catalog():
    code, out, _ = run("search")
    data = json.loads(out)
    assert code == 0 and data["win3_finite"] == []
    assert run("search")[1] == out
    code, out, _ = run("catalog")
    names = [e["name"] for e in json.loads(out)["catalog"]]
    assert code == 0 and "U_2(Z_2)" in names


@pytest.mark.parametrize("jobs", ["2", "4"])
def test_index_jobs_identical(jobs):
    assert run("index", "--spec", M2)[1] == run("index", "--spec", M2, "--jobs", jobs)[1]


def test_console_script():
    proc = subprocess.run(["wci", "index", "--spec", Z6], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["win"] == 2
    proc = subprocess.run(["wci", "index", "--spec", "{"], capture_output=True, text=True)
    assert proc.returncode == 2
