import json
import subprocess
import sys

import pytest

from semideriv.cli import decode_matrix, main
from semideriv.report import SpecError
from semideriv.semiring import MAXPLUS_INT, NEG_INF, PolyNat


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_verify_strip_diag(capsys):
    code, doc = run(capsys, "verify", "--semiring", "bool", "--family", "utm", "--n", "3",
                    "--derivation", "strip-diag", "--mode", "exhaustive")
    assert code == 0 and doc["report"]["status"] == "pass"


def test_verify_delta1_nat(capsys):
    code, doc = run(capsys, "verify", "--semiring", "nat", "--family", "utm", "--n", "2",
                    "--derivation", "example5.delta1", "--mode", "exhaustive", "--max-entry", "2")
    assert code == 1
    leib = next(r for r in doc["report"]["results"] if r["name"] == "leibniz")
    assert leib["witnesses"][0]["A"] == [[1, 0], [0, 1]] == leib["witnesses"][0]["B"]


def test_verify_strict_is_usage_error(capsys):
    code, _ = run(capsys, "verify", "--semiring", "nat", "--n", "2", "--derivation", "example5.delta1",
                  "--max-entry", "1", "--strict")
    assert code == 2


def test_verify_polyderiv_sampled(capsys):
    code, doc = run(capsys, "verify", "--semiring", "natpoly", "--family", "all", "--n", "2",
                    "--derivation", "hereditary:polyderiv", "--mode", "sampled", "--samples", "100", "--seed", "7")
    assert code == 0
    assert doc["report"]["mode"] == {"sampled": {"seed": 7, "count": 100}}


def test_theorem_t1(capsys):
    code, doc = run(capsys, "theorem", "--id", "t1", "--n", "3", "--semiring", "bool")
    assert code == 0 and len(doc["report"]["items"]) == 7


def test_theorem_t3_known_refutation(capsys):
    code, doc = run(capsys, "theorem", "--id", "t3", "--n", "3", "--semiring", "bool")
    assert code == 0
    b = next(it for it in doc["report"]["items"] if it["item"] == "b")
    assert b["status"] == "refuted" and b["status_note"] == "refuted-known"
    code, _ = run(capsys, "theorem", "--id", "t3", "--n", "3", "--allow-known-refutations", "")
    assert code == 1


def test_theorem_p5_chain(capsys):
    code, _ = run(capsys, "theorem", "--id", "p5", "--n", "3", "--semiring", "chain:2")
    assert code == 0


def test_theorem_bad_id(capsys):
    assert run(capsys, "theorem", "--id", "t7", "--n", "3")[0] == 2


def test_pattern_maxplus(capsys):
    code, doc = run(capsys, "pattern", "--matrix", '{"semiring": "maxplus-int", "entries": [[3, null], [null, 0]]}')
    assert code == 0 and doc == [[1, 0], [0, 1]]


def test_pattern_from_file(capsys, tmp_path):
    p = tmp_path / "m.json"
    p.write_text('[[0, 2], [0, 0]]')
    code, doc = run(capsys, "pattern", "--semiring", "nat", "--input", str(p))
    assert code == 0 and doc == [[0, 1], [0, 0]]


def test_pattern_parse_error(capsys):
    assert run(capsys, "pattern", "--matrix", '{"semiring": "bool", "entries": [[2]]}')[0] == 2
    assert run(capsys, "pattern", "--matrix", "[[1,")[0] == 2


def test_classify_example6(capsys):
    code, doc = run(capsys, "classify", "--derivation", "example6", "--semiring", "bool", "--n", "3")
    assert code == 0 and (doc["kind"], doc["index"]) == ("nilpotent", 2)


def test_commutant_shift_cyclic(capsys):
    code, doc = run(capsys, "commutant", "--matrix", "shift-cyclic", "--n", "2", "--semiring", "bool",
                    "--family", "all")
    assert code == 0 and doc["count"] == 4
    assert sorted(map(str, doc["commutant"])) == sorted(
        map(str, [[[0, 0], [0, 0]], [[1, 0], [0, 1]], [[0, 1], [1, 0]], [[1, 1], [1, 1]]])
    )


def test_counterexample_command(capsys):
    code, doc = run(capsys, "counterexample", "--derivation", "toeplitz.phi", "--n", "4")
    assert code == 1 and doc["counterexample"] is not None


def test_axioms_and_closure(capsys):
    assert run(capsys, "axioms", "--semiring", "chain:3")[0] == 0
    code, doc = run(capsys, "axioms", "--semiring", "nat", "--mode", "sampled", "--samples", "500")
    assert code == 0 and doc["report"]["mode"]["sampled"]["count"] == 500
    assert run(capsys, "closure", "--family", "toeplitz", "--n", "3")[0] == 1
    assert run(capsys, "closure", "--family", "circulant", "--n", "3")[0] == 0


@pytest.mark.parametrize("argv", [
    ["verify", "--semiring", "bogus", "--derivation", "example1"],
    ["verify", "--derivation", "nope"],
    ["verify", "--derivation", "example1", "--family", "diag"],
    ["verify", "--semiring", "nat", "--derivation", "example1"],
    ["commutant", "--matrix", "Q", "--n", "2"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_argparse_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == 2


def test_output_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["theorem", "--id", "p6", "--n", "3", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["report"]["theorem"] == "p6"


def test_decode_matrix():
    m = decode_matrix({"semiring": "maxplus-int", "n": 2, "entries": [[1, None], [None, 0]]})
    assert m.semiring == MAXPLUS_INT and m[0, 1] is NEG_INF
    p = decode_matrix({"semiring": "natpoly", "entries": [[[1, 2]]]})
    assert p[0, 0] == PolyNat((1, 2))
    with pytest.raises(SpecError):
        decode_matrix({"semiring": "bool", "n": 3, "entries": [[1]]})
    with pytest.raises(SpecError):
        decode_matrix([[1]])


def test_console_entry_point_byte_identical(tmp_path):
    argv = [sys.executable, "-m", "semideriv", "verify", "--semiring", "nat", "--n", "2",
            "--derivation", "hereditary:zero", "--mode", "sampled", "--samples", "50", "--seed", "11"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and b"\"seed\": 11" in a
