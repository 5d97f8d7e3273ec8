import random

import pytest

from imlab.formula import Diamond, modal_depth, parse, render
from imlab.hilbert import Logic
from imlab.relframe import SizeLimitError, frame_properties, mask_of
from imlab.search import (
    canonical_formulas, depth_bounded_equivalence, enumerate_frame_masks,
    enumerate_frames, find_countermodel, irreflexivize, largest_bisimulation,
    preorder_masks, stack_interior_universe, transitive_masks, upset_masks,
)
from imlab.semantics import BirelModel, relational_extension


def test_enumeration_counts_match_literature():
    # labeled quasiorders and labeled transitive relations
    assert [len(preorder_masks(n)) for n in (1, 2, 3, 4)] == [1, 4, 29, 355]
    assert [len(transitive_masks(n)) for n in (1, 2, 3, 4)] == [2, 13, 171, 3994]


def test_one_world_frames():
    assert sum(1 for _ in enumerate_frames(1, Logic.CK4)) == 2
    assert sum(1 for _ in enumerate_frames(1, Logic.CS4)) == 1


def test_enumeration_is_lexicographic():
    masks = list(enumerate_frame_masks(2, Logic.CK4))
    assert masks == sorted(masks)


def test_enumeration_limit():
    with pytest.raises(SizeLimitError):
        list(enumerate_frame_masks(5, Logic.CK4))


def test_every_enumerated_frame_is_in_its_class():
    from imlab.relframe import classify_frame
    for logic in (Logic.IK4, Logic.GS4C):
        for frame in enumerate_frames(2, logic):
            assert logic in classify_frame(frame)


def test_countermodel_gd_needs_three_worlds():
    gd = parse("(p -> q) | (q -> p)")
    assert not find_countermodel(gd, Logic.CK4, 2).found
    res = find_countermodel(gd, Logic.CK4, 3)
    assert res.found and res.model.n == 3
    assert not frame_properties(res.model.frame).locally_linear
    ext = relational_extension(res.model, gd)
    assert not (ext >> res.world) & 1


def test_countermodel_fs_backward_gap(f2_frame):
    fs = parse("(<>p -> []q) -> [](p -> q)")
    res = find_countermodel(fs, Logic.K4I, 3)
    assert res.found
    assert not frame_properties(res.model.frame).backward_confluent
    exhausted = find_countermodel(fs, Logic.IK4, 3)
    assert not exhausted.found
    assert exhausted.frames_enumerated > 0


def test_countermodel_dp_exhausts_on_ik4():
    dp = parse("<>(p | q) -> <>p | <>q")
    assert not find_countermodel(dp, Logic.IK4, 3).found


def test_bisimulation_contains_identity(l62_model):
    b = largest_bisimulation(l62_model, l62_model)
    assert {(w, w) for w in range(3)} <= b


def test_bisimulation_contains_permutation(l62_model):
    # rename worlds by the permutation 0->2, 1->0, 2->1
    perm = {0: 2, 1: 0, 2: 1}
    frame = l62_model.frame
    from imlab.relframe import BirelFrame, Relation
    pre2 = Relation(3, [(perm[i], perm[j]) for i, j in frame.pre.pairs])
    mod2 = Relation(3, [(perm[i], perm[j]) for i, j in frame.mod.pairs])
    val2 = {p: mask_of(perm[w] for w in range(3) if (v >> w) & 1)
            for p, v in l62_model.valuation.items()}
    m2 = BirelModel(BirelFrame(3, pre2, mod2), val2)
    b = largest_bisimulation(l62_model, m2)
    assert {(w, perm[w]) for w in range(3)} <= b


def test_bisimulation_one_point_vs_total(l1_frame):
    from imlab.relframe import BirelFrame, Relation
    m1 = BirelModel(l1_frame, {"p": 0b1})
    big = BirelFrame(2, Relation.identity(2),
                     Relation(2, [(0, 0), (0, 1), (1, 0), (1, 1)]))
    m2 = BirelModel(big, {"p": 0b11})
    assert largest_bisimulation(m1, m2) == {(0, 0), (0, 1)}


def test_bisimilar_points_agree_to_depth_two():
    rng = random.Random(11)
    frames = list(enumerate_frames(2)) + list(enumerate_frames(1))
    for _ in range(60):
        f1, f2 = rng.choice(frames), rng.choice(frames)
        m1 = BirelModel(f1, {"p": rng.choice(upset_masks(f1.pre.rows, f1.n))})
        m2 = BirelModel(f2, {"p": rng.choice(upset_masks(f2.pre.rows, f2.n))})
        for w1, w2 in largest_bisimulation(m1, m2):
            res = depth_bounded_equivalence(m1, w1, m2, w2, 2, ("p",))
            assert res.equivalent, render(res.separating)


def test_irreflexivize_one_point(l1_frame):
    m = BirelModel(l1_frame, {"p": 0})
    out = irreflexivize(m, 3)
    assert out.n == 3
    assert out.frame.pre.pairs == {(i, j) for i in range(3) for j in range(3)}
    assert out.frame.mod.pairs == {(i, j) for i in range(3) for j in range(3) if i < j}


def test_irreflexivize_single_copy_empties_mod(l62_model):
    out = irreflexivize(l62_model, 1)
    assert out.frame.mod.pairs == set()


def test_irreflexivize_gap_model_two_copies(f2_model):
    out = irreflexivize(f2_model, 2)
    assert out.n == 6
    # (0,0) -> index 0, (1,1) -> index 3: the only modal pair
    assert out.frame.mod.pairs == {(0, 3)}
    assert out.valuation["p"] == mask_of([4, 5])


def test_irreflexivize_valuation_lifted(l62_model):
    out = irreflexivize(l62_model, 2)
    assert out.valuation["p"] == mask_of([2, 3])
    assert out.valuation["q"] == mask_of([4, 5])


def test_truncation_kills_diamonds(l1_frame):
    # the stacked model has a top copy without modal successors, and the
    # implication quantifier reaches it, so every diamond formula goes empty;
    # pointed agreement with the base model fails already at depth 1
    m = BirelModel(l1_frame, {"p": 0})
    out = irreflexivize(m, 3)
    assert relational_extension(out, parse("<>true")) == 0
    res = depth_bounded_equivalence(m, 0, out, 0, 1, ("p",))
    assert not res.equivalent
    assert isinstance(res.separating, Diamond)


def test_truncation_agrees_on_diamond_free_fragment(l1_frame):
    m = BirelModel(l1_frame, {"p": 0b1})
    out = irreflexivize(m, 4)
    box_free = [f for f in canonical_formulas(("p",), 2, 2)
                if "<>" not in render(f)]
    for f in box_free:
        base = (relational_extension(m, f) >> 0) & 1
        lifted = (relational_extension(out, f) >> 0) & 1
        assert base == lifted, render(f)


def test_interior_confluence_matches_base():
    for n in (1, 2):
        interior = stack_interior_universe(n, 4)
        for frame in enumerate_frames(n):
            base = frame_properties(frame)
            out = irreflexivize(BirelModel(frame, {}), 4)
            bounded = frame_properties(out.frame, universe=interior)
            assert base.forward_confluent == bounded.forward_confluent
            assert base.backward_confluent == bounded.backward_confluent
            assert base.downward_confluent == bounded.downward_confluent


def test_canonical_formulas_shape():
    forms = canonical_formulas(("p", "q"), 2, 2)
    assert len(forms) == len(set(forms))
    assert all(modal_depth(f) <= 2 for f in forms)
    rendered = {render(f) for f in forms}
    assert "p" in rendered and "<>true" in rendered and "[]<>p" in rendered
    assert "p & q" in rendered and "q & p" not in rendered  # sorted normal form
    depth1 = canonical_formulas(("p", "q"), 1, 2)
    assert all(modal_depth(f) <= 1 for f in depth1)
    assert canonical_formulas(("p", "q"), 2, 2) == forms  # deterministic


def test_depth_bounded_equivalence_reflexive(l62_model):
    assert depth_bounded_equivalence(l62_model, 1, l62_model, 1, 2, ("p", "q")).equivalent


def test_depth_limit():
    m = BirelModel(next(enumerate_frames(1)), {"p": 0})
    with pytest.raises(SizeLimitError):
        depth_bounded_equivalence(m, 0, m, 0, 9, ("p",))


def test_generator_separates_perturbed_valuations():
    rng = random.Random(5)
    frames = list(enumerate_frames(2)) + list(enumerate_frames(3))
    for _ in range(80):
        frame = rng.choice(frames)
        opens = upset_masks(frame.pre.rows, frame.n)
        v1, v2 = rng.sample(opens, 2) if len(opens) > 1 else (opens[0], opens[0])
        if v1 == v2:
            continue
        m1 = BirelModel(frame, {"p": v1})
        m2 = BirelModel(frame, {"p": v2})
        w = next(w for w in range(frame.n) if ((v1 ^ v2) >> w) & 1)
        res = depth_bounded_equivalence(m1, w, m2, w, 0, ("p",))
        assert not res.equivalent
        assert render(res.separating) == "p"
