import json

import pytest

from artifact.cli import (EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, ExpressionSyntaxError,
                          NonIntegerExponent, UnknownVariable, main, parse_poly, read_session)
from helpers import GF2, QQ, poly


def test_parse_examples():
    assert parse_poly("Z^2 - X^2*Y", QQ).terms == {(0, 0, 2): 1, (2, 1, 0): -1}
    assert parse_poly("Z^2 + 3*X^3*Y^3 + 2*X", GF2).terms == {(0, 0, 2): 1, (3, 3, 0): 1}
    f = parse_poly("Z^2 - (Y^2 - X^3)^3", QQ)
    assert f.terms == {(0, 0, 2): 1, (0, 6, 0): -1, (3, 4, 0): 3, (6, 2, 0): -3, (9, 0, 0): 1}


def test_aliases():
    assert parse_poly("Z1^2 - X1*Y1", QQ).terms == poly("Z^2 - X*Y").terms


@pytest.mark.parametrize("text,exc,span", [
    ("Z^2 - W", UnknownVariable, (6, 7)),
    ("Z^X", NonIntegerExponent, (2, 3)),
    ("Z^(1/2)", NonIntegerExponent, (2, 3)),
    ("2 X", ExpressionSyntaxError, (2, 3)),
    ("Z^2 +", ExpressionSyntaxError, (5, 6)),
    ("(Z", ExpressionSyntaxError, (2, 3)),
    ("Z $ 2", ExpressionSyntaxError, (2, 3)),
])
def test_parse_errors_carry_spans(text, exc, span):
    with pytest.raises(exc) as info:
        parse_poly(text, QQ)
    assert info.value.span == span


def test_print_parse_roundtrip():
    for text in ("Z^2 - (1/3)*X*Y^4 + 5/2*X^9", "Z^3 + X*Z - Y^7", "-X - Y"):
        f = parse_poly(text, QQ)
        assert parse_poly(f.to_str(), QQ).terms == f.terms


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze(capsys):
    code, out, _ = _run(capsys, "analyze", "Z^2 - X^2*Y", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["schema"] == "artifact-report/1"
    assert doc["surface"]["multiplicity"] == 2
    assert doc["surface"]["newton_set"] == [[0, 0, 2], [2, 1, 0]]
    assert doc["surface"]["cone"] == "PlanePower"
    ideals = [e.get("ideal", "M") for e in doc["locus"]["elements"]]
    assert sorted(ideals) == ["(Z, X)", "M"]


def test_verify_type_ii(capsys):
    code, out, _ = _run(capsys, "verify", "Z^2 - (Y^2 - X^3)^3", "--dir", "1:0:0", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["verdict"] == "Pass"
    assert sorted(c["type"] for c in doc["reports"][0]["classification"]) == ["type_i", "type_ii"]


def test_verify_case_a_and_strict(capsys):
    code, out, _ = _run(capsys, "verify", "Z^2 - X^3*Y", "--center", "Z,X")
    assert code == EXIT_OK and "Pass" in out
    code, _, _ = _run(capsys, "verify", "Z^2 - X*Y", "--center", "Z,X", "--strict")
    assert code == EXIT_INCONCLUSIVE
    code, _, _ = _run(capsys, "verify", "Z^2 - X*Y", "--center", "Z,X")
    assert code == EXIT_OK


def test_usage_errors_go_to_stderr(capsys):
    code, out, err = _run(capsys, "analyze", "Z^2 - W")
    assert code == EXIT_USAGE and out == "" and "unknown variable" in err
    code, _, err = _run(capsys, "analyze")
    assert code == EXIT_USAGE
    code, _, err = _run(capsys, "analyze", "Z^2", "--field", "GF:4")
    assert code == EXIT_USAGE


def test_blowup_and_blowdown(capsys):
    code, out, _ = _run(capsys, "blowup", "Z^2 - X^3", "--center", "Z,X", "--dir", "1:0", "--json")
    t = json.loads(out)["transforms"][0]
    assert code == EXIT_OK and t["new_multiplicity"] == 1
    code, out, _ = _run(capsys, "blowdown", "--G", "Y^3", "--json")
    b = json.loads(out)["blowdown"]
    assert b["H"] == "X^4 + Y^3" and b["u"] == "1"


def test_session_file(tmp_path, capsys):
    path = tmp_path / "s.txt"
    path.write_text("# worked instance\nfield = GF:7\nsurface = Z^2 - X^3*Y^3\ndir = 1:0:0\njson = true\n",
                    encoding="utf-8")
    assert read_session(str(path))["field"] == "GF:7"
    code, out, _ = _run(capsys, "verify", "--session", str(path))
    doc = json.loads(out)
    assert code == EXIT_OK and doc["config"]["field"] == "GF:7" and doc["verdict"] == "Pass"


def test_fuzz_deterministic(capsys):
    _, first, _ = _run(capsys, "fuzz", "--seed", "42", "--count", "4", "--json")
    _, second, _ = _run(capsys, "fuzz", "--seed", "42", "--count", "4", "--json")
    assert first == second and json.loads(first)["counts"]["Fail"] == 0


def test_exit_codes_depend_on_verdict():
    from artifact.cli import _verdict_code
    assert _verdict_code(["Pass", "Fail"], False) == EXIT_FAIL
    assert _verdict_code(["Pass", "Inconclusive"], True) == EXIT_INCONCLUSIVE
    assert _verdict_code(["Pass", "Inconclusive"], False) == EXIT_OK
