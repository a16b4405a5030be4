import csv
import io
import json

import pytest

from coe_homology.cli import main
from coe_homology.errors import HypothesisViolation, InstanceError, ResourceLimit, UnresolvedReference
from coe_homology.instance import bundled_corpus, dump_instance, parse_instance
from coe_homology.report import Report, emit_report, run_command

MINIMAL = '{"groups": {"e": {"family": "cyclic", "n": 1}}, "actions": {}, "links": {}, "params": {}}'


def test_minimal_document():
    inst = parse_instance(MINIMAL)
    assert list(inst.groups) == ["e"] and not inst.links
    assert inst.params.max_degree == 3


def test_bundled_z4_vs_klein():
    inst = bundled_corpus("z4_vs_klein")
    assert list(inst.links) == ["z4_vs_klein"]
    assert inst.link("z4_vs_klein").verified


def test_unresolved_references():
    doc = json.loads(MINIMAL)
    doc["links"] = {"l": {"G": "nope", "H": "nope", "derive": {"phi": [0]}}}
    with pytest.raises(UnresolvedReference):
        parse_instance(json.dumps(doc))
    doc = json.loads(MINIMAL)
    doc["actions"] = {"a": {"group": "missing", "regular": True}}
    with pytest.raises(UnresolvedReference):
        parse_instance(json.dumps(doc))


@pytest.mark.parametrize("patch", [
    lambda d: d.update(extra=1),
    lambda d: d["groups"]["e"].update(size=1),
    lambda d: d["params"].update(max_degre=2),
])
def test_strict_keys(patch):
    doc = json.loads(MINIMAL)
    patch(doc)
    with pytest.raises(InstanceError, match="unknown key"):
        parse_instance(json.dumps(doc))


def test_duplicate_keys_and_syntax_position():
    with pytest.raises(InstanceError, match="duplicate"):
        parse_instance('{"groups": {}, "groups": {}}')
    with pytest.raises(InstanceError) as e:
        parse_instance('{\n  "groups": {\n    "a": [1,,]\n  }\n}')
    assert e.value.line == 3 and e.value.column > 0


def test_bad_tables_rejected():
    doc = json.loads(MINIMAL)
    doc["groups"]["bad"] = {"family": "explicit", "table": [[0, 1], [1, 1]]}
    with pytest.raises(InstanceError, match="latin_square"):
        parse_instance(json.dumps(doc))
    doc = json.loads(MINIMAL)
    doc["groups"]["z2"] = {"family": "cyclic", "n": 2}
    doc["actions"]["a"] = {"group": "z2", "points": 2, "table": [[0, 1], [0, 0]]}
    with pytest.raises(InstanceError, match="permutation"):
        parse_instance(json.dumps(doc))


def test_degree_cap_in_params():
    doc = json.loads(MINIMAL)
    doc["params"]["max_degree"] = 9
    with pytest.raises(ResourceLimit):
        parse_instance(json.dumps(doc))


def test_round_trip_is_stable(corpus):
    text = dump_instance(corpus)
    again = parse_instance(text, corpus.name)
    assert dump_instance(again) == text
    assert again.content_hash == corpus.content_hash


def test_lazy_link_errors(corpus):
    with pytest.raises(HypothesisViolation):
        corpus.link("nonfree_point")
    assert not corpus.link("corrupted_cocycle").verified


def test_emit_empty_report():
    rep = Report("verify")
    for fmt in ("text", "json", "csv"):
        out = emit_report(rep, fmt)
        assert out.endswith("\n")
    assert json.loads(emit_report(rep, "json"))["schema"] == "coe-homology-report/1"
    assert emit_report(rep, "csv") == "subject,group,coefficients,orientation,degree,dim\n"


def test_verify_identity_all_pass(corpus):
    rep = run_command("verify", corpus, link="id_z4")
    assert rep.ok and rep.verdicts and all(v["verdict"] == "pass" for v in rep.verdicts)


def test_homology_z2_table(corpus):
    rep = run_command("homology", corpus, link="id_z2", max_degree=1)
    rows = {(d["coefficients"], d["degree"]): d["dim"] for d in rep.dimensions}
    assert rows[("N0*", 0)] == 1 and rows[("W0*", 0)] == 2


def test_transfer_z4_vs_klein(corpus):
    rep = run_command("transfer", corpus, link="z4_vs_klein", max_degree=2)
    assert rep.ok
    doc = json.loads(emit_report(rep, "json"))
    assert {v["verdict"] for v in doc["verdicts"]} == {"pass"}
    assert any(v["check"] == "homology_chain_map_d2" for v in doc["verdicts"])


def test_csv_rows(corpus):
    rep = run_command("cohomology", corpus, link="blockswap", max_degree=2)
    rows = list(csv.DictReader(io.StringIO(emit_report(rep, "csv"))))
    assert len(rows) == 2 * 2
    assert {r["coefficients"] for r in rows} == {"N0**", "W0**"}


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["verify", "--link", "id_z2"]) == 0
    assert main(["verify", "--link", "missing"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"groups": 1}')
    assert main(["verify", "--instance", str(bad)]) == 2
    assert main(["verify", "--instance", str(tmp_path / "absent.json")]) == 2
    assert main(["verify", "--seed", "-1"]) == 2
    # a link that is expected to pass but does not
    doc = json.loads(dump_instance(bundled_corpus()))
    doc["links"]["corrupted_cocycle"].pop("expect")
    failing = tmp_path / "failing.json"
    failing.write_text(json.dumps(doc))
    assert main(["verify", "--instance", str(failing), "--link", "corrupted_cocycle"]) == 1
    capsys.readouterr()


def test_cli_resource_error(monkeypatch, capsys):
    monkeypatch.setenv("COE_HOMOLOGY_MAX_DEGREE", "2")
    assert main(["homology", "--link", "id_z2"]) == 2
    assert "exceeds cap" in capsys.readouterr().err


def test_cli_out_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["transfer", "--link", "blockswap", "--format", "json", "--seed", "11"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["params"]["seed"] == 11 and "timings" not in doc


def test_negative_fixtures_in_report(corpus):
    rep = run_command("verify", corpus)
    rows = {(v["subject"], v["check"]): v for v in rep.verdicts}
    assert rows[("link nonfree_point", "derive")]["negative_fixture"]
    assert rows[("link nonfree_point", "expectation_reject")]["verdict"] == "pass"
    assert rows[("link corrupted_cocycle", "expectation_fail")]["verdict"] == "pass"
    assert rows[("link corrupted_cocycle", "inverse_relation_c")]["verdict"] == "fail"
    assert rep.ok
