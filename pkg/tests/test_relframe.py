from itertools import product

import pytest

from imlab.hilbert import Logic
from imlab.relframe import (
    BirelFrame, Relation, classify_frame, closure, compose, frame_properties,
    lead_relation, mask_of, relational_operators, worlds_of,
)


def brute_compose(pairs_r, pairs_s):
    return {(a, c) for a, b in pairs_r for b2, c in pairs_s if b == b2}


def brute_transitive_closure(pairs, n):
    pairs = set(pairs)
    while True:
        new = pairs | brute_compose(pairs, pairs)
        if new == pairs:
            return pairs
        pairs = new


def brute_lead(pre_pairs, mod_pairs, n):
    return brute_transitive_closure(brute_compose(pre_pairs, mod_pairs), n)


def test_mask_helpers():
    assert mask_of([0, 2]) == 0b101
    assert worlds_of(0b101) == (0, 2)
    assert worlds_of(0) == ()


def test_compose_examples():
    assert compose(Relation(3, [(0, 1)]), Relation(3, [(1, 2)])).pairs == {(0, 2)}
    assert compose(Relation(3, [(0, 1)]), Relation(3, [])).pairs == set()
    r = Relation(3, [(0, 0), (1, 1), (2, 2), (0, 1)])
    s = Relation(3, [(0, 2), (1, 2)])
    assert compose(r, s).pairs == {(0, 2), (1, 2)}


def test_compose_arity_mismatch():
    with pytest.raises(ValueError):
        compose(Relation(2, []), Relation(3, []))


def test_closure_examples():
    assert closure(Relation(3, [(0, 1), (1, 2)]), "transitive").pairs == {
        (0, 1), (1, 2), (0, 2)}
    assert closure(Relation(2, []), "reflexive-transitive").pairs == {(0, 0), (1, 1)}
    once = closure(Relation(3, [(0, 1)]), "transitive")
    assert closure(once, "transitive") == once


def test_closure_matches_bruteforce():
    for bits in range(512):
        pairs = {(i, j) for i in range(3) for j in range(3) if (bits >> (3 * i + j)) & 1}
        got = closure(Relation(3, pairs), "transitive").pairs
        assert got == brute_transitive_closure(pairs, 3)


def test_lead_relation_fixtures(l62_frame, f2_frame, l1_frame):
    for frame in (l62_frame, f2_frame, l1_frame):
        expected = brute_lead(frame.pre.pairs, frame.mod.pairs, frame.n)
        assert lead_relation(frame).pairs == expected
    assert l62_frame.lead.pairs == {(0, 2), (1, 2)}
    assert f2_frame.lead.pairs == {(0, 1)}
    assert l1_frame.lead.pairs == {(0, 0)}


def test_relational_operators(l62_frame, f2_frame):
    d_mod, _ = relational_operators(f2_frame.mod)
    assert d_mod(0b100) == 0
    _, e_lead = relational_operators(l62_frame.lead)
    assert e_lead(0b100) == 0b111
    for rel in (l62_frame.mod, f2_frame.pre):
        d, e = relational_operators(rel)
        assert d(0) == 0
        assert e((1 << rel.n) - 1) == (1 << rel.n) - 1


def test_operator_laws_on_small_relations():
    # additivity of the derivative and multiplicativity of the integral
    for bits in range(16):
        rel = Relation(2, [(i, j) for i in range(2) for j in range(2)
                           if (bits >> (2 * i + j)) & 1])
        d, e = relational_operators(rel)
        for a, b in product(range(4), range(4)):
            assert d(a | b) == d(a) | d(b)
            assert e(a & b) == e(a) & e(b)


def test_frame_properties_fixtures(l62_frame, f2_frame, fork_frame):
    p = frame_properties(f2_frame)
    assert (p.forward_confluent, p.backward_confluent,
            p.downward_confluent, p.locally_linear) == (True, False, True, True)
    p = frame_properties(l62_frame)
    assert (p.forward_confluent, p.backward_confluent,
            p.downward_confluent, p.locally_linear) == (True, True, True, True)
    assert not frame_properties(fork_frame).locally_linear


def test_backward_confluence_fails_on_the_gap_frame(f2_frame):
    # 0 mod 1 pre 2 has no w with 0 pre w mod 2
    assert not frame_properties(f2_frame).backward_confluent


def test_classify_fixtures(l62_frame, f2_frame, l1_frame):
    assert classify_frame(f2_frame) == frozenset({Logic.CK4, Logic.K4I})
    assert classify_frame(l62_frame) == frozenset(
        {Logic.CK4, Logic.IK4, Logic.K4I, Logic.GK4, Logic.GK4C})
    assert classify_frame(l1_frame) == frozenset(Logic)


def test_frame_validation():
    with pytest.raises(ValueError, match="reflexive"):
        BirelFrame(2, Relation(2, [(0, 0)]), Relation(2, []))
    with pytest.raises(ValueError, match="transitive"):
        BirelFrame(3, Relation.identity(3), Relation(3, [(0, 1), (1, 2)]))
    with pytest.raises(ValueError, match="transitive"):
        BirelFrame(3, Relation(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]),
                   Relation(3, []))


def test_from_edges_closes():
    f = BirelFrame.from_edges(3, [(0, 1), (1, 2)], [(0, 1), (1, 2)])
    assert (0, 2) in f.pre.pairs and (0, 0) in f.pre.pairs
    assert (0, 2) in f.mod.pairs and (0, 0) not in f.mod.pairs


def test_relation_round_trips():
    r = Relation(3, [(0, 1), (2, 0)])
    assert Relation.from_mask(r.mask, 3) == r
    assert Relation.from_rows(r.rows) == r
    assert r.transpose().pairs == {(1, 0), (0, 2)}


def test_restricted_universe_matches_full_by_default(l62_frame):
    assert frame_properties(l62_frame) == frame_properties(
        l62_frame, universe=(1 << l62_frame.n) - 1)
