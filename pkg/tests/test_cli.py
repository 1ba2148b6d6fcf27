import json
from pathlib import Path

import pytest

from freeprod.cli import run_cli
from freeprod.documents import parse_automaton, parse_document, serialize_automaton
from freeprod.errors import InputError
from freeprod.fixtures import add, rz2
from freeprod.free_product import FreeProductAutomaton

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
RZ2_FILE, ADD_FILE = str(FIXTURES / "rz2.json"), str(FIXTURES / "add.json")


def run(capsys, *argv):
    code = run_cli([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_shipped_fixtures_match_code():
    assert parse_automaton(Path(RZ2_FILE).read_text()) == rz2()
    assert parse_automaton(Path(ADD_FILE).read_text()) == add()
    assert Path(RZ2_FILE).read_text() == serialize_automaton(rz2())


def test_round_trip_is_byte_identical(rr):
    for aut in (rz2(), add(), rr):
        text = serialize_automaton(aut)
        again = parse_document(text)
        assert serialize_automaton(again) == text
    assert parse_document(serialize_automaton(rr)) == rr


def test_product_documents_keep_structure(rr):
    doc = parse_document(serialize_automaton(rr))
    assert isinstance(doc, FreeProductAutomaton)
    assert "D(a,b)" in doc.alphabet and "G_HALF" in doc.alphabet
    assert doc.phi == {"x.L": "x.R", "y.L": "x.R"}


def _doc(**changes):
    obj = json.loads(serialize_automaton(rz2()))
    obj.update(changes)
    return obj


def test_missing_pair_is_named():
    obj = _doc()
    obj["transitions"] = [t for t in obj["transitions"] if (t["from"], t["input"]) != ("y", "b")]
    with pytest.raises(InputError, match=r"missing transition for \('y', 'b'\)"):
        parse_automaton(json.dumps(obj))


def test_duplicate_and_unknown_are_located():
    obj = _doc()
    obj["transitions"].append(dict(obj["transitions"][0]))
    with pytest.raises(InputError, match=r"transitions\[4\]: duplicate"):
        parse_automaton(json.dumps(obj))
    obj = _doc()
    obj["transitions"][2]["to"] = "z"
    with pytest.raises(InputError, match=r"transitions\[2\]: unknown state 'z'"):
        parse_automaton(json.dumps(obj))
    with pytest.raises(InputError, match="identifier"):
        parse_automaton(json.dumps(_doc(states=["x", "y z"])))
    with pytest.raises(InputError, match="line 1"):
        parse_automaton("{not json")


def test_act_and_eq(capsys):
    assert run(capsys, "act", ADD_FILE, "q,q", "00")[:2] == (0, "01\n")
    assert run(capsys, "act", ADD_FILE, "q", "")[:2] == (0, "\n")
    assert run(capsys, "eq", RZ2_FILE, "x,y", "y")[:2] == (0, "equal\n")
    code, out, _ = run(capsys, "eq", ADD_FILE, "q,q", "q")
    assert code == 1 and out == "unequal\nwitness: 0\n"


def test_exit_codes_for_errors(capsys, tmp_path):
    code, _, err = run(capsys, "eq", RZ2_FILE, "x,z", "y")
    assert code == 2 and "unknown state" in err
    assert run(capsys, "eq", str(tmp_path / "nope.json"), "x", "y")[0] == 2
    code, _, err = run(capsys, "eq", ADD_FILE, "q,e", "e,q", "--state-cap", "1")
    assert code == 3 and "cap of 1" in err


def test_checkhom(capsys):
    code, out, _ = run(capsys, "checkhom", ADD_FILE, RZ2_FILE, "--map", "q:x,e:y", "--max-word-len", 2)
    assert code == 1 and "q,e = q" in out
    code, out, _ = run(capsys, "checkhom", ADD_FILE, RZ2_FILE, "--map", "q:x,e:x", "--max-word-len", 4)
    assert code == 0 and out.startswith("PASS at bound 4")


def test_idempotents_and_growth(capsys):
    assert run(capsys, "idempotents", RZ2_FILE, "--max-word-len", 2)[1] == "x\ny\n"
    code, out, _ = run(capsys, "growth", ADD_FILE, "--max-word-len", 3)
    assert out.splitlines()[1:] == ["1\t2\t2", "2\t1\t3", "3\t1\t4"]


def test_freeproduct_and_verify(capsys, tmp_path):
    product = tmp_path / "rr.json"
    code, out, _ = run(capsys, "freeproduct", RZ2_FILE, RZ2_FILE, "--map", "x:x,y:x",
                       "--rename-on-collision", "--out", product)
    assert code == 0 and out == "4 states, 19 symbols\n"
    assert len(json.loads(product.read_text())["alphabet"]) == 19

    report = tmp_path / "report.json"
    code, _, _ = run(capsys, "verify", product, "--max-word-len", 3, "--out", report)
    data = json.loads(report.read_text())
    assert code == 0
    assert data["violations"] == [] and data["pairs_checked"] == 3486
    assert data["bounds"] == {"max_word_len": 3, "depth": 4, "state_cap": 1_000_000}
    assert data["version"] == "0.1.0"

    # same report from the factor files, byte for byte
    again = tmp_path / "again.json"
    run(capsys, "verify", RZ2_FILE, RZ2_FILE, "--map", "x:x,y:x", "--rename-on-collision", "--out", again)
    assert again.read_bytes() == report.read_bytes()


def test_verify_flags_a_corrupted_product(capsys, tmp_path):
    obj = json.loads(serialize_automaton(parse_document(_product_text(capsys, tmp_path))))
    for t in obj["transitions"]:
        if (t["from"], t["input"]) == ("x.L", "G_CLOSED"):
            t["to"] = "x.L"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "verify", bad, "--max-word-len", 2, "--depth", 2)
    data = json.loads(out)
    assert code == 1
    assert data["violations_total"] > 0
    assert data["table_mismatches"][0]["state"] == "x.L"
    assert {"lhs", "rhs", "witness", "direction"} == set(data["violations"][0])


def _product_text(capsys, tmp_path):
    path = tmp_path / "p.json"
    run(capsys, "freeproduct", RZ2_FILE, RZ2_FILE, "--map", "x:x,y:x", "--rename-on-collision", "--out", path)
    return path.read_text()


def test_freeproduct_adjoins_word_images(capsys, tmp_path):
    path = tmp_path / "ra.json"
    code, _, _ = run(capsys, "freeproduct", RZ2_FILE, ADD_FILE, "--map", "x:q+q,y:q+q", "--out", path)
    assert code == 0
    doc = parse_document(path.read_text())
    assert "q_q" in doc.states and doc.phi == {"x": "q_q", "y": "q_q"}


def test_collision_without_rename(capsys):
    code, _, err = run(capsys, "freeproduct", RZ2_FILE, RZ2_FILE, "--map", "x:x,y:x")
    assert code == 2 and "--rename-on-collision" in err


def test_chain(capsys, tmp_path):
    path = tmp_path / "chain.json"
    code, out, _ = run(capsys, "chain", RZ2_FILE, RZ2_FILE, RZ2_FILE, "--hom", "2@x:x,y:x", "--hom", "3@x:x,y:x",
                       "--rename-on-collision", "--out", path)
    assert code == 0 and out == "6 states, 155 symbols\n"
    code, _, _ = run(capsys, "verify", path, "--max-word-len", 2, "--depth", 2)
    assert code == 0
    assert run(capsys, "chain", RZ2_FILE, RZ2_FILE, "--hom", "x:x")[0] == 2


def test_output_is_deterministic(capsys):
    first = run(capsys, "freeproduct", ADD_FILE, RZ2_FILE, "--map", "q:x,e:x")
    second = run(capsys, "freeproduct", ADD_FILE, RZ2_FILE, "--map", "q:x,e:x")
    assert first == second and first[0] == 0
