import json

import pytest

from imlab.cli import ModelParseError, dispatch, format_model, parse_model
from imlab.semantics import relational_extension
from imlab.formula import parse

L62_TEXT = """\
# the box-over-meet countermodel
worlds 3
pre 0 1
mod 0 2
mod 1 2
val p 1
val q 2
"""


def test_parse_model_l62(l62_model):
    m = parse_model(L62_TEXT)
    assert m.frame == l62_model.frame
    assert m.valuation == l62_model.valuation


def test_parse_model_closes_generators():
    m = parse_model("worlds 3\npre 0 1\npre 1 2\nmod 0 1\nmod 1 2\n")
    assert (0, 2) in m.frame.pre.pairs
    assert (0, 2) in m.frame.mod.pairs


def test_parse_model_rejects_open_valuation():
    text = L62_TEXT.replace("val p 1", "val p 0")
    with pytest.raises(ValueError, match=r"0 in \|\|p\|\|, 0 pre 1, 1 not in"):
        parse_model(text)


def test_parse_model_close_valuation_flag():
    m = parse_model(L62_TEXT + "val r 0\n", close_valuation=True)
    assert m.valuation["r"] == 0b011


def test_parse_model_empty_mod_section():
    m = parse_model("worlds 2\npre 0 1\n")
    assert m.frame.mod.pairs == set()


def test_parse_model_errors():
    with pytest.raises(ModelParseError, match="line 1"):
        parse_model("pre 0 1\n")
    with pytest.raises(ModelParseError, match="bad world index"):
        parse_model("worlds 2\npre 0 5\n")
    with pytest.raises(ModelParseError, match="unknown directive"):
        parse_model("worlds 2\nedge 0 1\n")
    with pytest.raises(ModelParseError):
        parse_model("")


def test_format_model_round_trip(l62_model, f2_model):
    for model in (l62_model, f2_model):
        text = format_model(model)
        again = parse_model(text)
        assert again.frame == model.frame
        assert again.valuation == model.valuation
        assert format_model(again) == text


@pytest.fixture
def model_file(tmp_path):
    path = tmp_path / "l62.model"
    path.write_text(L62_TEXT)
    return str(path)


def test_cli_parse(capsys):
    assert dispatch(["parse", "p -> q -> p"]) == 0
    assert capsys.readouterr().out.strip() == "p -> q -> p"
    assert dispatch(["parse", "p ->"]) == 2


def test_cli_parse_json(capsys):
    assert dispatch(["parse", "--json", "[]p & q"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "ok"
    assert report["modal_depth"] == 1
    assert report["propositions"] == ["p", "q"]


def test_cli_eval(model_file, capsys):
    assert dispatch(["eval", "--model", model_file, "--json",
                     "[]q -> p | (p -> q)"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["extension"]["operator"] == [1, 2]
    assert report["extension"]["relational"] == [1, 2]


def test_cli_valid_exit_codes(model_file, capsys):
    assert dispatch(["valid", "--model", model_file, "!<>false"]) == 0
    capsys.readouterr()
    assert dispatch(["valid", "--model", model_file, "--json",
                     "[]q -> p | (p -> q)"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "invalid"
    assert report["witness"]["world"] == 0
    assert report["witness"]["valuation"] == {"p": [1], "q": [2]}
    assert report["stats"]["valuations_checked"] >= 1


def test_cli_classify_frame(model_file, capsys):
    assert dispatch(["classify-frame", "--model", model_file, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["classes"] == ["CK4", "GK4", "GK4c", "IK4", "K4I"]
    assert report["properties"]["backward_confluent"] is True


def test_cli_classify_space(model_file, capsys):
    assert dispatch(["classify-space", "--model", model_file, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["flags"]["diamond_coarse"] is True
    assert "IK4" in report["classes"]


def test_cli_topo_props(tmp_path, capsys):
    path = tmp_path / "sierpinski.topology"
    path.write_text("worlds 2\nopen\nopen 1\nopen 0 1\n")
    assert dispatch(["topo-props", "--topology", str(path), "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["properties"]["t_d"] is True
    assert report["properties"]["scattered"] is True


def test_cli_derive(tmp_path, capsys):
    good = tmp_path / "good.derivation"
    good.write_text(
        "p -> (q -> p) ; axiom a1\n"
        "[](p -> (q -> p)) ; nec 0\n"
        "[](p -> (q -> p)) -> ([]p -> [](q -> p)) ; axiom kbox\n"
        "[]p -> [](q -> p) ; mp 1 2\n")
    assert dispatch(["derive", "--logic", "CK4", str(good)]) == 0
    capsys.readouterr()
    bad = tmp_path / "bad.derivation"
    bad.write_text("<>p ; axiom a1\n")
    assert dispatch(["derive", "--logic", "CK4", "--json", str(bad)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "rejected"
    assert report["offending_step"] == 0


def test_cli_entail(tmp_path):
    cert = tmp_path / "cert.entailment"
    cert.write_text(
        "premise p\n"
        "conclusion p\n"
        "p -> ((p -> p) -> p) ; axiom a1\n"
        "(p -> ((p -> p) -> p)) -> ((p -> (p -> p)) -> (p -> p)) ; axiom a2\n"
        "(p -> (p -> p)) -> (p -> p) ; mp 0 1\n"
        "p -> (p -> p) ; axiom a1\n"
        "p -> p ; mp 3 2\n")
    assert dispatch(["entail", "--logic", "IS4", str(cert)]) == 0


def test_cli_search(capsys):
    assert dispatch(["search", "--logic", "CK4", "--max-worlds", "3", "--json",
                     "(p -> q) | (q -> p)"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "countermodel"
    assert report["stats"]["frames_enumerated"] >= 1
    assert dispatch(["search", "--logic", "IK4", "--max-worlds", "2",
                     "<>(p | q) -> <>p | <>q"]) == 0


def test_cli_irreflexivize(model_file, capsys):
    assert dispatch(["irreflexivize", "--model", model_file, "-k", "2"]) == 0
    out = capsys.readouterr().out
    again = parse_model(out)
    assert again.n == 6
    assert again.frame.mod.is_irreflexive()


def test_cli_bisim(model_file, tmp_path, capsys):
    other = tmp_path / "renamed.model"
    other.write_text("worlds 3\npre 2 0\nmod 2 1\nmod 0 1\nval p 0\nval q 1\n")
    assert dispatch(["bisim", "--model", model_file, "--model2", str(other)]) == 0
    no_match = tmp_path / "different.model"
    no_match.write_text("worlds 1\nval p 0\nval q 0\n")
    assert dispatch(["bisim", "--model", model_file, "--model2", str(no_match)]) == 1


def test_cli_usage_errors(model_file):
    assert dispatch(["no-such-command"]) == 2
    assert dispatch(["valid", "--model", "/nonexistent.model", "p"]) == 2
    assert dispatch(["eval", "--model", model_file, "p @ q"]) == 2
    assert dispatch(["derive", "--logic", "XYZ", model_file]) == 2


def test_cli_demo_box_over_meet(capsys):
    assert dispatch(["demo", "lemma-6.2", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "ok"
    assert report["countermodel"]["refuted_world"] == 0
    assert report["meet_sweep"]["violations"] == 0


def test_cli_demo_backward_gap(capsys):
    assert dispatch(["demo", "footnote-2", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "ok"
    assert report["k4i_search"]["found"] is True
    assert report["ik4_search"]["found"] is False


def test_cli_demo_loeb(capsys):
    assert dispatch(["demo", "loeb", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "ok"
    assert report["refutation"]["extension"] == []
    assert report["td_sweep"]["violations"] == 0


def test_exit_codes_depend_only_on_verdict(model_file):
    # same command twice: identical exit status
    first = dispatch(["valid", "--model", model_file, "[]q -> p | (p -> q)"])
    second = dispatch(["valid", "--model", model_file, "[]q -> p | (p -> q)"])
    assert first == second == 1


def test_loaded_model_evaluates(model_file, l62_model):
    m = parse_model(L62_TEXT)
    f = parse("[]q -> p | (p -> q)")
    assert relational_extension(m, f) == relational_extension(l62_model, f)
