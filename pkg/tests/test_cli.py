import json

import pytest

from quotlab import io
from quotlab.catalog import witness
from quotlab.cli import main


@pytest.fixture
def files(tmp_path):
    out = {}
    sq = witness("sq-4-2")
    out["tuple"] = tmp_path / "sq42.tuple.json"
    out["tuple"].write_text(io.dumps(io.tuple_to_json(sq.tuple)))
    out["module"] = tmp_path / "sq42.module.json"
    out["module"].write_text(io.dumps(io.module_to_json(sq.module())))
    out["w332"] = tmp_path / "w332.module.json"
    out["w332"].write_text(io.dumps(io.module_to_json(witness("w332").module())))
    out["bad"] = tmp_path / "bad.json"
    out["bad"].write_text('{"n": 2, "d": 2, "matrices": [[[0,1],[0,0]], [[1,0],[0,2]]]}')
    out["broken"] = tmp_path / "broken.json"
    out["broken"].write_text('{"n": 2,\n "d": 2 "matrices": []}')
    out["dual"] = tmp_path / "dual.json"
    out["dual"].write_text(json.dumps({"n": 2, "r": 1, "dualGenerators": [
        [{"coeff": "1", "z": [2, 0], "gen": 0}, {"coeff": "1", "z": [0, 2], "gen": 0}]]}))
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_tangent(capsys, files):
    code, out, _ = run(capsys, "tangent", files["tuple"])
    assert code == 0 and "24" in out
    code, payload = run_json(capsys, "tangent", files["tuple"])
    assert payload == {"seed": 0, "tangent": 24}


def test_tangent_full_includes_basis(capsys, files):
    _, payload = run_json(capsys, "tangent", files["tuple"], "--full")
    assert len(payload["basis"]) == 24


def test_support(capsys, files):
    _, payload = run_json(capsys, "support", files["tuple"])
    assert payload["support"] == [{"point": ["0", "0", "0", "0"], "multiplicity": 4}]


def test_module_from_tuple(capsys, files):
    code, payload = run_json(capsys, "module", files["tuple"], "--gens", "3,4")
    assert code == 0 and len(payload["kGenerators"]) == 6
    code, _, err = run(capsys, "module", files["tuple"], "--gens", "9")
    assert code == 2 and "1..4" in err


def test_hilbert_betti_hom_ext(capsys, files):
    assert run_json(capsys, "hilbert", files["module"])[1]["hilbert"] == [2, 2]
    betti = run_json(capsys, "betti", files["module"])[1]["betti"]
    assert {"i": 0, "j": 0, "beta": 2} in betti
    assert run_json(capsys, "hom", files["module"])[1]["dims"] == {"-1": 4, "0": 12}
    assert run_json(capsys, "ext1", files["module"])[1]["dims"] == {"-2": 16}
    _, out, _ = run(capsys, "hom", files["module"])
    assert "-1: 4" in out and "0: 12" in out


def test_hom_bases_only_with_full(capsys, files):
    assert "bases" not in run_json(capsys, "hom", files["module"])[1]
    assert len(run_json(capsys, "hom", files["module"], "--full")[1]["bases"]["-1"]) == 4


def test_apolar(capsys, files):
    code, payload = run_json(capsys, "apolar", "--dual", files["dual"])
    assert code == 0 and len(payload["kGenerators"]) == 2


def test_tnt_graded_and_filtered(capsys, files):
    _, payload = run_json(capsys, "tnt", files["module"])
    assert payload["tnt"] and payload["smoothness"] == "smooth-on-elementary"
    _, payload = run_json(capsys, "tnt", files["w332"])
    assert payload["route"] == "filtered" and payload["negative"] == 5 and payload["tnt"]


def test_obstruction(capsys, files):
    code, payload = run_json(capsys, "obstruction", files["module"], "--pairs", "6", "--seed", "3")
    assert code == 0 and payload["seed"] == 3
    assert payload["variables"] == 4 and payload["quadrics"] == 16 and payload["identities"]["ok"]
    code, out, _ = run(capsys, "obstruction", files["module"], "--pairs", "6", "--seed", "3")
    assert "seed 3" in out


def test_enumerate(capsys):
    code, payload = run_json(capsys, "enumerate", "--n", "7", "--d", "7")
    assert payload["count"] == 13
    _, payload = run_json(capsys, "enumerate", "--n", "5", "--d", "7", "--r", "3", "--list")
    assert payload["count"] == 7 and len(payload["components"]) == 7
    code, _, err = run(capsys, "enumerate", "--n", "4", "--d", "8")
    assert code == 2 and "d <= 7" in err


def test_witness(capsys):
    code, payload = run_json(capsys, "witness", "sq-5-2", "--verify")
    assert code == 0 and payload["ok"] and payload["tangent"] == 41
    assert run(capsys, "witness", "nope")[0] == 2


def test_replay_tables(capsys):
    code, out, _ = run(capsys, "replay-tables")
    assert code == 0 and "all entries match" in out


def test_input_errors(capsys, files, tmp_path):
    code, _, err = run(capsys, "tangent", files["bad"])
    assert code == 2 and "matrices 1 and 2 do not commute" in err
    code, _, err = run(capsys, "tangent", files["broken"])
    assert code == 2 and "broken.json:2:" in err
    code, _, _ = run(capsys, "tangent", tmp_path / "missing.json")
    assert code == 2
    assert run(capsys, "nosuchcommand")[0] == 2


def test_idempotent_output(capsys, files):
    first = run(capsys, "obstruction", files["module"], "--pairs", "5", "--json")
    second = run(capsys, "obstruction", files["module"], "--pairs", "5", "--json")
    assert first == second


def test_nonreduced_command(capsys, tmp_path):
    path = tmp_path / "nr.json"
    path.write_text(io.dumps(io.module_to_json(witness("nonreduced-8").module())))
    code, payload = run_json(capsys, "nonreduced", path, "--seed", "2")
    assert code == 0 and payload["verdict"] == "NONREDUCED" and payload["seed"] == 2
    assert payload["certificate"]["targetDim"] == 4
    code, out, _ = run(capsys, "nonreduced", path)
    assert "verdict: NONREDUCED" in out and "seed: 0" in out
