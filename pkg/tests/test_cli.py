import io
import json
import subprocess
import sys

import pytest

from qwitt.cli import run
from qwitt.rings import get_ring
from qwitt.witt import WittContext, WittVector, witt_mul


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, json.loads(out.getvalue())


def test_witt_mul_from_file(tmp_path):
    doc = {"ring": "Zq", "g": "q", "trunc": 2, "coords": ["1", "0"]}
    path = tmp_path / "a.json"
    path.write_text(json.dumps(doc))
    code, result = call("witt", "mul", "--ring", "Zq", "--g", "q", "--trunc", "2", "--in", str(path), "--in2", str(path))
    assert code == 0
    assert result["coords"] == ["1-q", "q-q^3"]


def test_mobius_listing():
    code, result = call("neck", "mobius", "--m", "0", "--n", "12")
    assert code == 0
    assert result == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]


def test_kimlee_expansion():
    code, result = call("series", "kimlee", "--trunc", "3", "--in", "[1,0,0]")
    assert code == 0
    assert result == ["-1+q", "-q+q^2", "-q^2+q^3"]


def test_output_documents_round_trip():
    code, doc = call("witt", "add", "--g", "1-2*q", "--in", '["1+q","2","-3"]', "--in2", '["q","0","1"]')
    assert code == 0
    code, again = call("witt", "add", "--in", json.dumps(doc), "--in2", json.dumps({**doc, "coords": ["0"] * 3}))
    assert code == 0 and again["coords"] == doc["coords"]
    ctx = WittContext.make(get_ring(doc["ring"]), doc["trunc"], g=doc["g"])
    a = WittVector.parse(ctx, doc["coords"])
    code, product = call("witt", "mul", "--in", json.dumps(doc), "--in2", json.dumps(doc))
    assert product["coords"] == witt_mul(a, a).to_strings()


def test_other_groups_produce_json():
    assert call("neck", "coeff", "--m", "0", "--n", "6", "--i", "2", "--j", "3")[0] == 0
    assert call("bridge", "teich", "--ring", "Z+trivpsi", "--m", "0", "--n", "4", "--in", "2")[1]["values"] == ["2", "1", "2", "3"]
    code, result = call("symfun", "u", "--vars", "2", "--n", "2")
    assert code == 0 and result["terms"]
    assert call("series", "theta", "--m", "0", "--ring", "Z", "--in", "[1,0]")[1]["coeffs"] == ["1", "1", "1"]
    assert call("witt", "gen-polys", "--n", "2")[0] == 0


def test_parse_errors_exit_two():
    code, result = call("witt", "mul", "--g", "q", "--in", "[1,", "--in2", "[1]")
    assert code == 2 and result["error"] == "ParseError"
    code, result = call("witt", "add", "--in", '["1"]', "--in2", '["1"]')
    assert code == 2


def test_domain_errors_exit_three():
    code, result = call("witt", "unity", "--ring", "Zq", "--g", "q", "--trunc", "3")
    assert code == 3 and result["error"] == "NotUnital"
    code, result = call("witt", "restrict", "--m", "0", "--r", "2", "--n", "3", "--in", "[1,2,3,4]")
    assert code == 3 and result["error"] == "TruncationTooShort"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qwitt", "neck", "mobius", "--m", "2", "--n", "3"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == [1, -3, -7]


def test_unknown_subcommand_is_rejected_by_argparse():
    with pytest.raises(SystemExit):
        run(["witt", "frobnicate"], io.StringIO())
