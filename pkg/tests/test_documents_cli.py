import json
import subprocess
import sys

import numpy as np
import pytest

from orthowork.cli import main
from orthowork.constructions import horizontal_sum
from orthowork.documents import (
    Workspace,
    dumps,
    embedding_from_doc,
    embedding_to_doc,
    export_dot,
    format_function,
    function_from_doc,
    function_to_doc,
    lattice_from_doc,
    lattice_to_doc,
    parse_function,
    term_from_doc,
    term_to_doc,
)
from orthowork.interpolation import FunctionTable
from orthowork.morphisms import Embedding
from orthowork.lattice import boolean_lattice, chain, pentagon
from orthowork.ortho import zoo
from orthowork.terms import parse


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", ["2-chain", "B2", "O6", "MO2", "B3", "N5", "M3"])
def test_lattice_round_trip(name):
    L = zoo(name)
    doc = lattice_to_doc(L)
    back = lattice_from_doc(json.loads(dumps(doc)))
    assert back.names == L.names
    assert np.array_equal(back.leq, L.leq)
    assert hasattr(back, "perp") == hasattr(L, "perp")
    if hasattr(L, "perp"):
        assert list(back.perp) == list(L.perp)
    assert dumps(lattice_to_doc(back)) == dumps(doc)


def test_lattice_doc_from_leq_pairs_and_zoo_name():
    doc = {"elements": ["0", "a", "1"], "leq": [["0", "a"], ["a", "1"]]}
    L = lattice_from_doc(doc)
    assert L.size == 3 and L.le(0, 2)
    assert lattice_from_doc("O6").size == 6


def test_embedding_round_trip():
    e = horizontal_sum(boolean_lattice(2), chain(3)).embeddings["A→L"]
    back = embedding_from_doc(json.loads(dumps(embedding_to_doc(e))))
    assert list(back.map) == list(e.map) and back.target.size == e.target.size


def test_function_literals():
    B2 = zoo("B2")
    f = parse_function("0:1, a:b, b:a, 1:0", B2)
    assert f.arity == 1 and [f.entries[(x,)] for x in range(4)] == list(B2.perp)
    assert format_function(f) == "0:1,a:b,b:a,1:0"
    g = parse_function("(a,b):0,(a,a):a", B2)
    assert g.arity == 2 and g.entries[(1, 2)] == 0
    assert function_from_doc(function_to_doc(g), B2).entries == g.entries
    with pytest.raises(ValueError):
        parse_function("a:0,(a,b):0", B2)
    with pytest.raises(ValueError):
        parse_function("a:0,a:1", B2)
    with pytest.raises(KeyError):
        parse_function("z:0", B2)


def test_term_docs():
    t = parse("(x0 | a)^' & b")
    doc = term_to_doc(t)
    assert term_from_doc(doc) == t and term_from_doc(doc["text"]) == t


@pytest.mark.parametrize("name, nodes, edges", [("2-chain", 2, 1), ("B2", 4, 4), ("O6", 6, 6)])
def test_dot_counts(name, nodes, edges):
    text = export_dot(zoo(name))
    lines = text.splitlines()
    assert lines[0].startswith("digraph") and lines[1] == "  rankdir=BT;"
    assert sum(1 for l in lines if l.strip().startswith('"') and "->" not in l) == nodes
    assert sum(1 for l in lines if "->" in l) == edges


def test_dot_perp_edges_and_determinism():
    O = zoo("O6")
    text = export_dot(O, show_perp=True)
    assert text.count("style=dashed") == 3
    assert text == export_dot(zoo("O6"), show_perp=True)
    assert "style=dashed" not in export_dot(O)
    assert export_dot(pentagon()) == export_dot(pentagon())


def test_workspace_round_trip_is_byte_stable():
    ws = Workspace()
    B2, L = boolean_lattice(2), None
    res = horizontal_sum(B2, chain(3))
    L = res.result
    ws.lattices.update({"B2": B2, "L": L})
    ws.embeddings["e"] = res.embeddings["A→L"]
    ws.functions["f"] = FunctionTable.total(B2, [3, 2, 1, 0])
    ws.terms["t"] = parse("x0^' | a")
    text = ws.dumps()
    again = Workspace.loads(text)
    assert again.dumps() == text
    assert list(again.embeddings["e"].map) == list(res.embeddings["A→L"].map)
    with pytest.raises(ValueError):
        Workspace.from_doc({"version": 99})


def test_cli_zoo_and_dot(capsys):
    code, out, _ = run(["zoo"], capsys)
    assert code == 0 and "O6" in out
    code, out, _ = run(["zoo", "--name", "O6", "--export-dot", "--perp"], capsys)
    assert code == 0 and out == export_dot(zoo("O6"), show_perp=True, graph_name="O6")
    code, out, _ = run(["export-dot", "B2"], capsys)
    assert code == 0 and out == export_dot(zoo("B2"))


def test_cli_validate(tmp_path, capsys):
    code, out, _ = run(["validate", "O6"], capsys)
    assert code == 0 and json.loads(out)["ortho"] is True
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"elements": ["0", "a", "b", "1"], "leq": [["0", "a"], ["0", "b"]]}))
    code, _, err = run(["validate", str(bad)], capsys)
    assert code == 4 and "invalid" in err


def test_cli_usage_errors(capsys):
    assert run(["validate", "no-such-thing"], capsys)[0] == 1
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
    capsys.readouterr()


def test_cli_interpolate_exit_codes(capsys):
    code, out, _ = run(["interpolate", "B2", "--fn", "0:1,a:b,b:a,1:0"], capsys)
    assert code == 0 and json.loads(out)["term"]["text"] == "x0^'"
    code, _, _ = run(["interpolate", "2-chain", "--mode", "lattice", "--fn", "0:1,1:0"], capsys)
    assert code == 3
    code, _, _ = run(["interpolate", "MO2", "--fn", "0:a,a:a',a':b,b:b',b':1,1:0", "--budget", "50"], capsys)
    assert code == 2


def test_cli_closure_and_pipeline(capsys, tmp_path):
    code, out, _ = run(["closure", "2-chain"], capsys)
    assert code == 0 and json.loads(out)["size"] == 4
    target = tmp_path / "trace.json"
    code, _, _ = run(["extend-pipeline", "--l0", "2-chain", "--fn", "0:1,1:0", "--out", str(target)], capsys)
    assert code == 0
    first = target.read_bytes()
    run(["extend-pipeline", "--l0", "2-chain", "--fn", "0:1,1:0", "--out", str(target)], capsys)
    assert target.read_bytes() == first
    assert json.loads(first)["verified"] is True


def test_cli_construct_and_relate(tmp_path, capsys):
    code, out, _ = run(["construct", "hsum", "B2", "3-chain"], capsys)
    doc = json.loads(out)
    assert code == 0 and len(doc["result"]["elements"]) == 5
    e = horizontal_sum(boolean_lattice(2), chain(3)).embeddings["A→L"]
    path = tmp_path / "e.json"
    path.write_text(dumps(embedding_to_doc(e)))
    assert run(["relate", str(path), "--require", "Triangle", "--require", "Convex"], capsys)[0] == 0
    path.write_text(dumps(embedding_to_doc(Embedding(chain(3), chain(4), [0, 2, 3]))))
    code, out, _ = run(["relate", str(path), "--require", "Triangle"], capsys)
    assert code == 3 and json.loads(out)["certificates"]["Sub01"]["passed"] is True
    code, out, _ = run(["construct", "random-ortho", "--seed", "4", "--dot"], capsys)
    assert code == 0 and "digraph" in json.loads(out)["dot"]
    code, _, _ = run(["construct", "product", "B3", "B3", "--size-cap", "10"], capsys)
    assert code == 2


def test_cli_nary(capsys):
    code, out, _ = run(["nary-reduce", "B2", "--fn", "(a,b):0,(a,a):a,(b,b):b,(b,a):0"], capsys)
    assert code == 0 and json.loads(out)["status"] == "found"


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "orthowork.cli", "zoo"], capture_output=True, text=True)
    assert proc.returncode == 0 and "B2" in proc.stdout


def test_forged_certificate_is_rejected():
    from orthowork.exceptions import MorphismError

    e = horizontal_sum(boolean_lattice(2), chain(3)).embeddings["A→L"]
    doc = embedding_to_doc(e)
    assert embedding_from_doc(doc).certificates == e.certificates
    doc = embedding_to_doc(Embedding(chain(3), chain(4), [0, 2, 3]))
    doc["certificates"] = ["Triangle"]
    with pytest.raises(MorphismError):
        embedding_from_doc(doc)
