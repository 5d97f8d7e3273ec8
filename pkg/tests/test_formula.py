import pytest
from hypothesis import given, strategies as st

from imlab.formula import (
    BOT, TOP, And, Box, Diamond, Implies, Or, ParseError, Prop,
    instantiate, InstantiationError, is_metavar, metavariables, modal_depth,
    node_count, parse, propositions, render, subformula_closure,
)

p, q, r = Prop("p"), Prop("q"), Prop("r")


def test_parse_single_connective():
    assert parse("p -> q") == Implies(p, q)


def test_parse_dp_instance():
    assert parse("<>(p | q) -> <>p | <>q") == Implies(
        Diamond(Or(p, q)), Or(Diamond(p), Diamond(q)))


def test_parse_precedence():
    # unary > & > | > ->, so the body groups as p | ((!q) & r)
    assert parse("[] p -> p | !q & r") == Implies(
        Box(p), Or(p, And(Implies(q, BOT), r)))


def test_parse_right_associative_implication():
    assert parse("p -> q -> r") == Implies(p, Implies(q, r))


def test_parse_left_associative_and_or():
    assert parse("p & q & r") == And(And(p, q), r)
    assert parse("p | q | r") == Or(Or(p, q), r)


def test_sugar():
    assert parse("!p") == Implies(p, BOT)
    assert parse("true") == Implies(BOT, BOT)
    assert parse("false") == BOT


def test_parse_error_offset_and_expected():
    with pytest.raises(ParseError) as exc:
        parse("p -> ")
    assert exc.value.offset == 5
    assert exc.value.expected
    with pytest.raises(ParseError) as exc:
        parse("p @ q")
    assert exc.value.offset == 2


def test_parse_trailing_garbage():
    with pytest.raises(ParseError):
        parse("p q")


def test_render_examples():
    assert render(Implies(p, q)) == "p -> q"
    assert render(And(Or(p, q), r)) == "(p | q) & r"
    assert render(Box(Implies(p, BOT))) == "[]!p"
    assert render(TOP) == "true"


def test_render_nested_implication_parens():
    f = Implies(Implies(p, q), r)
    assert render(f) == "(p -> q) -> r"
    assert parse(render(f)) == f


_formula = st.deferred(lambda: st.one_of(
    st.just(BOT),
    st.sampled_from([p, q, r]),
    st.builds(And, _formula, _formula),
    st.builds(Or, _formula, _formula),
    st.builds(Implies, _formula, _formula),
    st.builds(Box, _formula),
    st.builds(Diamond, _formula),
))


@given(_formula)
def test_parse_render_round_trip(f):
    assert parse(render(f)) == f


def test_subformula_closure_examples():
    f = parse("<>p -> []q")
    assert subformula_closure(f) == frozenset([f, Diamond(p), Box(q), p, q])
    assert subformula_closure(BOT) == frozenset([BOT])
    g = parse("[](p & p)")
    assert subformula_closure(g) == frozenset([g, And(p, p), p])


@given(_formula)
def test_subformula_closure_bounded_by_node_count(f):
    assert len(subformula_closure(f)) <= node_count(f)


def test_instantiate_examples():
    four_box = parse("[]A -> [][]A")
    assert instantiate(four_box, {"A": And(p, q)}) == parse("[](p & q) -> [][](p & q)")
    gd = parse("(A -> B) | (B -> A)")
    assert instantiate(gd, {"A": p, "B": q}) == parse("(p -> q) | (q -> p)")
    n_axiom = parse("!<>false")
    assert instantiate(n_axiom, {}) == parse("!<>false")


def test_instantiate_is_homomorphic():
    binding = {"A": p, "B": Diamond(q)}
    left, right = parse("A & B"), parse("B | A")
    assert instantiate(And(left, right), binding) == And(
        instantiate(left, binding), instantiate(right, binding))


def test_instantiate_unbound_metavariable():
    with pytest.raises(InstantiationError):
        instantiate(parse("A -> B"), {"A": p})


def test_modal_depth():
    assert modal_depth(parse("p -> q")) == 0
    assert modal_depth(parse("[](p -> <>q)")) == 2
    assert modal_depth(parse("<><>p -> <>p")) == 2


def test_metavariable_namespace():
    assert is_metavar("A") and is_metavar("Phi")
    assert not is_metavar("p") and not is_metavar("prop1")
    assert propositions(parse("A & p")) == ("p",)
    assert metavariables(parse("A & p")) == ("A",)
