from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from supergeom import cli
from supergeom.artin import FiniteSuperAlgebra
from supergeom.curves import CoverData
from supergeom.grassmann import GrassmannScalar, SuperMatrix

eps = lambda i: GrassmannScalar.generator(i, 2)
H_MAP = {"contracted": False, "image": "H", "degree": 1}
SMOOTH = {"graph": {"components": [["C", 0]]}, "maps": {"C": H_MAP}}
BETA = {"dim": 1, "terms": [["H", [1, 1]]]}
TRIANGLE = {"flags": ["e^s", "e^t"], "vertices": ["v", "w"], "boundary": [["e^s", "v"], ["e^t", "w"]],
            "involution": [["e^s", "e^t"], ["e^t", "e^s"]]}

RECORDS = {
    "ber": SuperMatrix.from_blocks([[1]], [[eps(1)]], [[eps(2)]], [[1]], 2).to_json(),
    "length": {"algebra": FiniteSuperAlgebra.truncated_polynomial(2).product(FiniteSuperAlgebra.grassmann(1)).to_json(),
               "module": "regular", "semilocal": True},
    "order": {"model": {"base": "A1", "torsion": [["t", 1]]}, "point": "t", "function": "t"},
    "div": {"model": {}, "function": "t**2/(t - 1)"},
    "pushforward": {"cycle": {"dim": 1, "terms": [["Z", [1, 1]]]}, "map": {"images": [["Z", "W", 2]]}},
    "pullback": {"cycle": {"dim": 0, "terms": [["t - 1", [1, 0]]]},
                 "data": CoverData.double_cover().pullback_data(["t - 1"]).to_json()},
    "rateq": {"cycle": {"dim": 0, "terms": [["t", [1, 1]], ["inf", [-1, -1]]]},
              "witnesses": [{"model": {}, "function": "t"}]},
    "hodge": {"genus": 1, "bundle": {"kind": "trivial"}},
    "frolicher": {"genus": 0, "bundle": {"kind": "generic", "degree": -1}},
    "koszul": {"n": 2, "wmax": 4},
    "stability": {"components": [["C", 0]], "ns": [["C", "a"], ["C", "b"]]},
    "susy": {"graph": {"components": [["C", 0]], "rr": [["C", "p"], ["C", "q"]]}, "degL": {"C": 0}},
    "stablemap": {"fibers": [SMOOTH], "beta": BETA},
    "betagood": {"family": [["good", [SMOOTH]], ["bad", [{"graph": {"components": [["C", 0]]},
                                                         "maps": {"C": dict(H_MAP, degree=2)}}]]], "beta": BETA},
    "nori-build": {"poset": {"elements": ["a", "b", "c"], "relations": [["a", "b"], ["b", "c"]]}, "imax": 1},
    "nori-end": {"graph": TRIANGLE, "rep": {"dims": {"v": [1, 0], "w": [1, 0]}, "edges": [["e", [["1"]]]]}},
    "selftest": {"seed": 0},
}

EXPECTED = {
    "ber": {"berezinian": [[[], "1"], [[1, 2], "-1"]]},
    "order": {"order": [1, 2], "point": "t"},
    "rateq": {"equivalent": True},
    "stability": {"stable": False},
    "susy": {"ok": True},
    "stablemap": {"stable": True},
    "betagood": {"labels": ["good"]},
    "nori-end": {"dimension": [1, 0]},
    "length": {"length": [3, 1], "method": "semilocal"},
    "pushforward": {"cycle": {"dim": 1, "terms": [["W", [2, 2]]]}},
    "frolicher": {"verdict": "compatible"},
}

FAST = [c for c in cli.COMMANDS if c != "selftest"]


def test_every_command_has_a_record():
    assert set(RECORDS) == set(cli.COMMANDS)


@pytest.mark.parametrize("command", FAST)
def test_round_trip_against_output_schema(command):
    res = cli.run(command, RECORDS[command])
    assert res.status == "ok", res.diagnostics
    envelope = json.loads(cli.dumps(res.to_json()))
    cli.validate(command, envelope, "output")
    for key, value in EXPECTED.get(command, {}).items():
        assert envelope["payload"][key] == value


@pytest.mark.parametrize("command", ["div", "hodge", "nori-build", "length"])
def test_deterministic_output(command):
    a = cli.dumps(cli.run(command, RECORDS[command]).to_json())
    b = cli.dumps(cli.run(command, RECORDS[command]).to_json())
    assert a == b


def run_main(argv, stdin_text=None, monkeypatch=None):
    out = io.StringIO()
    if stdin_text is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin_text))
    code = cli.main(argv, out=out)
    return code, out.getvalue()


def test_exit_codes(tmp_path, monkeypatch):
    good = tmp_path / "good.json"
    good.write_text(json.dumps(RECORDS["div"]))
    assert run_main(["div", str(good)])[0] == 0
    zero = tmp_path / "zero.json"
    zero.write_text(json.dumps({"model": {}, "function": "0"}))
    code, text = run_main(["div", str(zero)])
    assert code == 1 and "ZeroFunction" in text
    code, text = run_main(["div", "-"], "{\n  \"model\": \n", monkeypatch)
    env = json.loads(text)
    assert code == 2 and env["status"] == "error" and "line 3" in env["diagnostics"][0]
    code, text = run_main(["div", "-"], json.dumps({"model": {}}), monkeypatch)
    assert code == 2 and "schema" in text
    assert run_main(["div", str(tmp_path / "missing.json")])[0] == 2


def test_batch_with_jobs(tmp_path):
    paths = []
    for i, fn in enumerate(["t", "t - 1", "0"]):
        p = tmp_path / f"f{i}.json"
        p.write_text(json.dumps({"model": {}, "function": fn}))
        paths.append(str(p))
    code, text = run_main(["div", "--jobs", "2", *paths])
    batch = json.loads(text)
    assert code == 1 and [e["status"] for e in batch] == ["ok", "ok", "error"]


def test_hodge_flags():
    code, text = run_main(["hodge", "--genus", "1", "--bundle", "trivial"])
    payload = json.loads(text)["payload"]
    assert code == 0 and payload["hpq"]["0,1"] == [2, 0] and payload["frolicher"] == "incompatible"
    code, text = run_main(["hodge", "--genus", "1", "--convention", "sheaf", "--format", "text"])
    assert code == 0 and "(1|1)" in text
    assert run_main(["hodge", "--genus", "2", "--bundle", "generic:x"])[0] == 2
    assert run_main(["hodge", "--genus", "3", "--bundle", "generic:1"])[0] == 1


def test_koszul_flags():
    code, text = run_main(["koszul", "--m", "1", "--n", "1", "--cutoff", "3"])
    assert code == 0 and json.loads(text)["payload"]["equal"]
    code, text = run_main(["koszul", "--n", "9"])
    assert code == 1 and "CutoffTooLarge" in text


def test_stability_names_violated_inequality(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps(RECORDS["stability"]))
    code, text = run_main(["stability", str(p)])
    payload = json.loads(text)["payload"]
    assert code == 0 and not payload["stable"] and "2g-2+n" in payload["violations"][0]


def test_console_script_ber_identity(tmp_path):
    p = tmp_path / "id.json"
    p.write_text(json.dumps(SuperMatrix.identity(1, 1).to_json()))
    proc = subprocess.run([sys.executable, "-m", "supergeom.cli", "ber", str(p)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["berezinian"] == [[[], "1"]]
