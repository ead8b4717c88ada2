import json

import pytest

from artifact.locus import CurveIdeal
from artifact.transform import Direction
from artifact.verify import (FAIL, INCONCLUSIVE, PASS, case_b_reports, check_case_a, check_case_b,
                             fuzz_corpus, lemma_check, lemma_corpus, normal_form_oracle, random_surface, zx_curve)
from helpers import GF5, GF7, QQ, bivar, surface


def C(g, h, field=QQ):
    return CurveIdeal(bivar(g, field), bivar(h, field))


def test_case_a_survive_branch():
    r = check_case_a(surface("Z^2 - X^5"), zx_curve(QQ), Direction.make(QQ, (1, 0)))
    assert r.verdict == PASS and r.branch == "E0(S1) = nu(E0(S))"
    assert any(e.get("ideal") == "(Z1, X1)" for e in r.to_json()["locus_after"])


def test_case_a_removal_branch():
    r = check_case_a(surface("Z^2 - X^3*Y"), zx_curve(QQ), Direction.make(QQ, (1, 0)))
    assert r.verdict == PASS and r.branch == "E0(S1) = nu(E0(S) - {P})"
    assert all(e["kind"] == "origin" for e in r.to_json()["locus_after"])


def test_case_a_hypothesis_unmet():
    r = check_case_a(surface("Z^2 - X*Y"), zx_curve(QQ))
    assert r.verdict == INCONCLUSIVE


def test_case_b1_vacuous():
    r = check_case_b(surface("Z*(Z - X) + Y^5"), Direction.make(QQ, (0, 1, 0)))
    assert r.case == "b1" and r.verdict == PASS


@pytest.mark.parametrize("field", [QQ, GF7])
def test_case_b2_types(field):
    r = check_case_b(surface("Z^2 - X^3*Y^3", field), Direction.make(field, (1, 0, 0)))
    cls = {c["curve"]: c for c in r.to_json()["classification"]}
    assert r.verdict == PASS
    assert cls["(Z1, X1)"]["type"] == "type_i"
    assert cls["(Z1, Y1)"]["type"] == "type_iii" and cls["(Z1, Y1)"]["preimage"] == "(Z, Y)"


def test_case_b2_type_ii_implies_type_i():
    r = check_case_b(surface("Z^2 - (Y^2 - X^3)^3"), Direction.make(QQ, (1, 0, 0)))
    types = sorted(c["type"] for c in r.to_json()["classification"])
    assert r.verdict == PASS and types == ["type_i", "type_ii"]
    assert r.non_vacuous


def test_oracle_examples():
    S = surface("Z^2 - X^2*Y")
    assert normal_form_oracle(S, C("0", "X")) is True
    assert normal_form_oracle(S, C("0", "Y")) is False
    S = surface("Z^2")
    assert normal_form_oracle(S, C("0", "X + Y^2")) is True


def test_report_json_roundtrip():
    r = check_case_b(surface("Z^2 - X^2*Y"), Direction.make(QQ, (1, 0, 0)))
    text = r.dumps()
    assert json.loads(text) == r.to_json()
    assert json.dumps(json.loads(text), sort_keys=True, indent=2) == text


def test_generator_is_deterministic():
    a = [S.F.terms for S in fuzz_corpus(3, 8)]
    b = [S.F.terms for S in fuzz_corpus(3, 8)]
    assert a == b
    assert random_surface(GF5, 2, 6, 1).F.terms == random_surface(GF5, 2, 6, 1).F.terms


def test_small_fuzz_has_no_fail():
    verdicts = [r.verdict for S in fuzz_corpus(99, 25) for r in case_b_reports(S)]
    assert verdicts and FAIL not in verdicts


def test_lemma_small():
    for S in lemma_corpus(5, 20):
        assert all(m < S.n for m in lemma_check(S))
