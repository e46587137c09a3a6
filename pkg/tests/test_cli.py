import io
import json
from pathlib import Path

import jsonschema
import pytest

from bandkit.cli import ParseError, band_to_text, export_dot, main, parse_band_document
from bandkit.constructors import chain
from bandkit.core import free_band_two, validate_table

SCHEMA = json.loads((Path(__file__).parent.parent / "docs" / "cli-schema.json").read_text())


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run("--json", *argv)
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_construct_rect_then_analyze(tmp_path):
    code, out, _ = run("construct", "rect", "2", "3")
    assert code == 0
    path = write(tmp_path, "r.txt", out)
    code, out, _ = run("analyze", path)
    assert code == 0
    assert "|Y|=1" in out and "dims: (2,3)" in out and "RB=true" in out
    code, doc = run_json("analyze", path)
    assert doc["dims"] == [[2, 3]] and doc["varieties"]["RB"] is True


def test_homog_chain_exits_one(tmp_path):
    path = write(tmp_path, "c.txt", band_to_text(chain(2)))
    code, out, _ = run("homog", path)
    assert code == 1 and "witness" in out
    code, doc = run_json("homog", path)
    assert code == 1 and doc["homogeneous"] is False and doc["witness"]["dom"] == [0]
    code, doc = run_json("homog", "--k", "2", path)
    assert doc["mode"] == "k"


def test_validate_non_idempotent(tmp_path):
    path = write(tmp_path, "bad.txt", "2\n0 0\n0 0\n")
    code, out, err = run("validate", path)
    assert code == 2 and "NotIdempotent(1)" in err
    code, doc = run_json("validate", path)
    assert code == 2 and doc["error"] == "NotIdempotent(1)"


def test_parse_errors():
    with pytest.raises(ParseError) as e:
        parse_band_document("2\n0 1\n1 x\n")
    assert e.value.args[0] == 3
    B = parse_band_document(json.dumps({"n": 2, "table": [[0, 0], [1, 1]], "labels": ["a", "b"]}))
    assert B.labels == ("a", "b")


def test_usage_error():
    code, _, err = run("frobnicate")
    assert code == 2 and err.startswith("error:")


@pytest.mark.parametrize("kind,recipe", [
    ("rect", {"n": 2, "m": 2}),
    ("semilattice", {"n": 3, "order": [[0, 1], [0, 2]]}),
    ("strong", {"Y": {"n": 2, "order": [[0, 1]]}, "dims": [[1, 1], [2, 1]],
                "psi": [{"from": 1, "to": 0, "map": [0, 0]}]}),
    ("spined", {"left": {"n": 1, "table": [[0]]}, "right": {"n": 2, "table": [[0, 1], [0, 1]]},
                "Y": {"n": 1}, "left_to_y": [0], "right_to_y": [0, 0]}),
    ("direct", {"Y": {"n": 2, "order": [[0, 1]]}, "n": 1, "m": 2}),
    ("image-trivial", {"parent": [-1, 0, 0], "n": 1, "m": 2, "k": 1, "assign": {"1": 0, "2": 1}}),
    ("chain", {"levels": 2, "n": 1, "m": 2}),
])
def test_construct_round_trip(tmp_path, kind, recipe):
    code, out, _ = run("construct", kind, "--spec", json.dumps(recipe))
    assert code == 0
    B = parse_band_document(out)
    code, doc = run_json("construct", kind, "--spec", json.dumps(recipe))
    assert doc["table"] == [list(r) for r in B.table]
    path = write(tmp_path, "b.txt", out)
    code, doc = run_json("validate", path)
    assert code == 0 and doc["n"] == B.size


def test_construct_errors():
    code, _, err = run("construct", "strong", "--spec", "{}")
    assert code == 2
    code, _, err = run("construct", "rect", "0", "2")
    assert code == 2 and "ZeroDimension" in err


def test_classify_and_structure(tmp_path):
    code, out, _ = run("construct", "chain", "2", "1", "2")
    path = write(tmp_path, "d.txt", out)
    code, doc = run_json("classify", path)
    assert code == 1 and doc["homogeneous"] is False
    code, doc = run_json("homog", "--structure", path)
    assert code == 0 and doc["homogeneous"] is True
    rect = write(tmp_path, "r.txt", run("construct", "rect", "2", "2")[1])
    code, doc = run_json("classify", rect)
    assert code == 0 and doc["dims"] == [2, 2]


def test_enumerate(tmp_path):
    out = tmp_path / "cat.txt"
    code, doc = run_json("enumerate", "--order", "3", "--out", str(out))
    assert code == 0 and doc["count"] == 10
    assert out.read_text().startswith("BANDCAT v1")


def test_verify_suite():
    code, doc = run_json("verify-suite", "--max-order", "3")
    assert code == 0 and doc["ok"] and len(doc["checks"]) == 8


def test_amalgamate(tmp_path):
    pt = {"n": 1, "table": [[0]]}
    c2 = {"n": 2, "table": [[0, 0], [0, 1]]}
    prob = {"class": "Semilattices", "A": pt, "B1": c2, "B2": c2, "f1": [0], "f2": [0]}
    code, doc = run_json("amalgamate", "--problem", json.dumps(prob))
    assert code == 0 and doc["found"]
    lz = {"n": 3, "table": [[0, 0, 0], [1, 1, 1], [2, 2, 2]]}
    B = {"n": 4, "table": [[0, 0, 0, 0], [1, 1, 1, 1], [2, 2, 2, 2], [1, 1, 2, 3]]}
    prob = {"A": lz, "B1": B, "B2": B, "f1": [0, 1, 2], "f2": [1, 2, 0]}
    path = write(tmp_path, "p.json", json.dumps(prob))
    code, doc = run_json("amalgamate", "--problem", path, "--bound", "8", "--exhaustive-limit", "6")
    assert code == 1 and doc["found"] is False and doc["complete_up_to"] == 6


def test_fraisse_grow_and_audit(tmp_path):
    ch = str(tmp_path / "chain.txt")
    code, doc = run_json("fraisse", "grow", "--class", "Semilattices", "--chain", ch, "--stages", "2")
    assert code == 0 and doc["stages"][0] == 1 and len(doc["stages"]) == 3
    code, doc = run_json("fraisse", "audit", "--class", "Semilattices", "--chain", ch, "--k", "1")
    assert doc["types"] == 3 and doc["pending"] == 0
    code, doc = run_json("fraisse", "grow", "--class", "Semilattices", "--budget", "1")
    assert code == 1 and doc["budget_exhausted"]
    code, _, _ = run("fraisse", "audit", "--class", "Normal", "--chain", ch)
    assert code == 2


def test_export_dot():
    triv = validate_table(1, [[0]])
    dot = export_dot(triv, "order")
    assert dot.count("->") == 0 and "n0" in dot and dot.startswith("digraph")
    dot = export_dot(chain(2), "order")
    assert dot.count("->") == 1 and "n0 -> n1" in dot
    dot = export_dot(free_band_two(), "semilattice")
    assert dot.count("->") == 2 and len({line.split()[0] for line in dot.splitlines() if line.strip().startswith("c")}) == 3


def test_export_dot_cli(tmp_path):
    path = write(tmp_path, "c.txt", band_to_text(chain(3)))
    code, out, _ = run("export-dot", "order", path)
    assert code == 0 and out.count("->") == 2
