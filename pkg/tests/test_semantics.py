import random

import pytest

from imlab.formula import parse
from imlab.opspace import frame_to_space, space_classify
from imlab.relframe import SizeLimitError
from imlab.search import canonical_formulas, enumerate_frames, upset_masks
from imlab.semantics import (
    BirelModel, SpaceModel, extension, relational_extension, valid_on_frame,
)


def test_extension_box_over_meet_values(l62_model):
    assert extension(l62_model, parse("[]q")) == 0b111
    assert extension(l62_model, parse("p -> q")) == 0b100
    assert extension(l62_model, parse("[]q -> p | (p -> q)")) == 0b110


def test_extension_gap_model_values(f2_model):
    assert extension(f2_model, parse("<>p -> []q")) == 0b111
    assert extension(f2_model, parse("[](p -> q)")) == 0b110


def test_extension_bottom(l62_model):
    assert extension(l62_model, parse("false")) == 0
    assert extension(l62_model, parse("true")) == 0b111


def test_relational_extension_examples(f2_model, l1_frame):
    assert relational_extension(f2_model, parse("<>p")) == 0
    m = BirelModel(l1_frame, {"p": 0})
    assert relational_extension(m, parse("[]p")) == 0
    assert relational_extension(m, parse("[]p -> p")) == 0b1
    assert relational_extension(m, parse("[]([]p -> p)")) == 0b1
    assert relational_extension(m, parse("[]([]p -> p) -> []p")) == 0
    assert relational_extension(m, parse("true")) == 0b1


def test_valuation_must_be_upward_closed(l62_frame):
    with pytest.raises(ValueError, match="not pre-closed"):
        BirelModel(l62_frame, {"p": 0b001})


def test_space_valuation_must_be_open(l62_frame):
    space = frame_to_space(l62_frame)
    with pytest.raises(ValueError, match="not open"):
        SpaceModel(space, {"p": 0b001})


def test_missing_proposition(l62_model):
    with pytest.raises(KeyError):
        extension(l62_model, parse("r"))
    with pytest.raises(KeyError):
        relational_extension(l62_model, parse("r & p"))


def test_valid_on_space_examples(l62_frame, fork_frame, f2_frame):
    assert valid_on_frame(l62_frame, parse("!<>false")).valid
    res = valid_on_frame(fork_frame, parse("(p -> q) | (q -> p)"))
    assert not res.valid
    assert res.valuation == {"p": 0b010, "q": 0b100}
    assert res.world == 0
    res = valid_on_frame(f2_frame, parse("(<>p -> []q) -> [](p -> q)"))
    assert not res.valid
    assert res.valuation == {"p": 0b100, "q": 0}
    assert res.world == 0


def test_validity_size_limit(l62_frame):
    f = parse("p1 & p2 & p3 & p4 & p5 & p6 & p7 & p8 & p9 & p10")
    with pytest.raises(SizeLimitError):
        valid_on_frame(l62_frame, f)


def test_extensions_are_arrow_open():
    formulas = canonical_formulas(("p", "q"), 2, 2)
    for n in (1, 2):
        for frame in enumerate_frames(n):
            space = frame_to_space(frame)
            opens = upset_masks(frame.pre.rows, n)
            itab = space.i_arrow.table
            for p_val in opens:
                for q_val in opens:
                    model = BirelModel(frame, {"p": p_val, "q": q_val})
                    for f in formulas[::7]:
                        ext = extension(model, f)
                        assert itab[ext] == ext


def test_oracle_agreement_small():
    from imlab.sweeps import oracle_agreement_sweep
    assert oracle_agreement_sweep(max_worlds=2).ok


def test_oracle_agreement_depth3_sampled():
    rng = random.Random(2024)
    formulas = [f for f in canonical_formulas(("p", "q"), 3, 3)
                if f is not None]
    frames = []
    for n in (1, 2, 3):
        frames.extend(enumerate_frames(n))
    for _ in range(150):
        frame = rng.choice(frames)
        opens = upset_masks(frame.pre.rows, frame.n)
        model = BirelModel(frame, {"p": rng.choice(opens), "q": rng.choice(opens)})
        f = rng.choice(formulas)
        assert extension(model, f) == relational_extension(model, f)


def test_regular_spaces_collapse_the_modal_clauses():
    from imlab.formula import Box, Diamond
    formulas = canonical_formulas(("p", "q"), 1, 1)
    for n in (1, 2, 3):
        for frame in enumerate_frames(n):
            space = frame_to_space(frame)
            c = space_classify(space)
            if not (c.diamond_regular or c.box_regular):
                continue
            opens = upset_masks(frame.pre.rows, n)
            if c.box_regular:
                # box-regularity: the box integral equals the diamond dual on
                # open arguments, so the box clause needs no adjustment
                for u in opens:
                    assert space.e_box(u) == space.full & ~space.d_dia(space.full & ~u)
            model = BirelModel(frame, {"p": opens[-1], "q": opens[len(opens) // 2]})
            for f in formulas[::3]:
                ext = extension(model, f)
                if c.diamond_regular:
                    # the interior wrapper is redundant for the diamond
                    assert extension(model, Diamond(f)) == space.d_dia(ext)
                assert extension(model, Box(f)) == space.e_box(ext)


def test_box_clause_is_lead_integral(l62_model):
    space = frame_to_space(l62_model.frame)
    assert extension(l62_model, parse("[]p")) == space.e_box(
        extension(l62_model, parse("p")))
