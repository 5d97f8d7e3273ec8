"""Valuations, the operator-based evaluator, the relational evaluator used as
an independent oracle, and validity over all open-set valuations.

Formulas are compiled to postfix programs executed by the kernel backend.
The operator evaluator works on tabulated operator spaces; the relational
evaluator re-derives truth by direct quantifier evaluation over the frame
relations, so the two give genuinely independent routes to the same
extensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from . import kernels
from .formula import (
    And, Bottom, Box, Diamond, Formula, Implies, Or, Prop,
    is_metavar, propositions, render,
)
from .opspace import OperatorSpace, frame_to_space
from .relframe import BirelFrame, SizeLimitError, worlds_of

__all__ = [
    "SpaceModel", "BirelModel", "compile_formula", "compile_bank",
    "extension", "relational_extension", "ValidityResult",
    "valid_on_space", "valid_on_frame", "space_opens",
    "VALUATION_LIMIT",
]

#: refuse validity sweeps that would scan more assignments than this
VALUATION_LIMIT = 10_000_000


def compile_formula(f: Formula, props: Sequence[str]) -> np.ndarray:
    """Postfix program over the proposition order ``props``."""
    index = {p: i for i, p in enumerate(props)}
    code: list[int] = []

    def walk(g: Formula) -> None:
        if isinstance(g, Bottom):
            code.append(kernels.OP_BOT << 8)
        elif isinstance(g, Prop):
            if is_metavar(g.name):
                raise ValueError(f"cannot evaluate metavariable {g.name}")
            if g.name not in index:
                raise KeyError(f"proposition {g.name!r} missing from valuation")
            code.append(kernels.OP_PROP << 8 | index[g.name])
        elif isinstance(g, And):
            walk(g.left)
            walk(g.right)
            code.append(kernels.OP_AND << 8)
        elif isinstance(g, Or):
            walk(g.left)
            walk(g.right)
            code.append(kernels.OP_OR << 8)
        elif isinstance(g, Implies):
            walk(g.left)
            walk(g.right)
            code.append(kernels.OP_IMP << 8)
        elif isinstance(g, Box):
            walk(g.body)
            code.append(kernels.OP_BOX << 8)
        elif isinstance(g, Diamond):
            walk(g.body)
            code.append(kernels.OP_DIA << 8)
        else:
            raise TypeError(f"not a formula: {g!r}")

    walk(f)
    return np.array(code, np.int64)


def compile_bank(formulas: Sequence[Formula], props: Sequence[str]):
    """Concatenated programs with start/end offsets, for batch evaluation."""
    code: list[int] = []
    starts = []
    ends = []
    for f in formulas:
        starts.append(len(code))
        code.extend(int(x) for x in compile_formula(f, props))
        ends.append(len(code))
    return (np.array(code, np.int64), np.array(starts, np.int64),
            np.array(ends, np.int64))


class SpaceModel:
    """Operator space plus a valuation into arrow-open sets."""

    __slots__ = ("space", "valuation")

    def __init__(self, space: OperatorSpace, valuation: Mapping[str, int]):
        itab = space.i_arrow.table
        for p, v in valuation.items():
            if itab[v] != v:
                raise ValueError(f"valuation of {p!r} is not open: {worlds_of(v)}")
        self.space = space
        self.valuation = dict(valuation)

    @property
    def n(self) -> int:
        return self.space.n


class BirelModel:
    """Birelational frame plus an upward-closed valuation."""

    __slots__ = ("frame", "valuation")

    def __init__(self, frame: BirelFrame, valuation: Mapping[str, int]):
        rows = frame.pre.rows
        for p, v in valuation.items():
            for w in range(frame.n):
                if (v >> w) & 1 and rows[w] & ~v:
                    above = next(u for u in range(frame.n)
                                 if (rows[w] >> u) & 1 and not (v >> u) & 1)
                    raise ValueError(
                        f"val {p} not pre-closed: {w} in ||{p}||, {w} pre {above}, "
                        f"{above} not in ||{p}||")
        self.frame = frame
        self.valuation = dict(valuation)

    @property
    def n(self) -> int:
        return self.frame.n

    def to_space_model(self) -> SpaceModel:
        return SpaceModel(frame_to_space(self.frame), self.valuation)


def _propmask_matrix(valuation: Mapping[str, int], props: Sequence[str]) -> np.ndarray:
    return np.array([[valuation[p]] for p in props], np.int64) if props else np.zeros((1, 1), np.int64)


def extension(model: SpaceModel | BirelModel, f: Formula) -> int:
    """World-set of the formula under the operator semantics."""
    if isinstance(model, BirelModel):
        model = model.to_space_model()
    props = propositions(f)
    missing = [p for p in props if p not in model.valuation]
    if missing:
        raise KeyError(f"propositions missing from valuation: {missing}")
    code = compile_formula(f, props)
    space = model.space
    out = kernels.bank_eval_operator(
        code, np.array([0], np.int64), np.array([len(code)], np.int64),
        _propmask_matrix(model.valuation, props),
        np.asarray(space.i_arrow.table, np.int64),
        np.asarray(space.d_dia.table, np.int64),
        np.asarray(space.e_box.table, np.int64),
        space.full)
    return int(out[0, 0])


def relational_extension(model: BirelModel, f: Formula) -> int:
    """World-set of the formula by direct quantifier evaluation over the
    frame relations (the oracle route)."""
    props = propositions(f)
    missing = [p for p in props if p not in model.valuation]
    if missing:
        raise KeyError(f"propositions missing from valuation: {missing}")
    code = compile_formula(f, props)
    frame = model.frame
    out = kernels.bank_eval_relational(
        code, np.array([0], np.int64), np.array([len(code)], np.int64),
        _propmask_matrix(model.valuation, props),
        frame.pre.row_array(), frame.mod.row_array(), frame.lead.row_array(),
        (1 << frame.n) - 1)
    return int(out[0, 0])


@dataclass(frozen=True)
class ValidityResult:
    valid: bool
    formula: Formula
    valuation: Optional[dict[str, int]]
    world: Optional[int]
    valuations_checked: int

    def __bool__(self) -> bool:
        return self.valid


def space_opens(space: OperatorSpace) -> tuple[int, ...]:
    """Arrow-open sets in ascending bitmask order."""
    return tuple(sorted(space.opens()))


def valid_on_space(space: OperatorSpace, f: Formula) -> ValidityResult:
    """Check truth at every world under every valuation of the formula's
    propositions by arrow-open sets.  Counter-witnesses are lexicographically
    least: valuations ordered by (proposition name, open-set bitmask) with
    the first proposition most significant, then the least refuting world.
    """
    props = propositions(f)
    opens = space_opens(space)
    total = len(opens) ** len(props)
    if total > VALUATION_LIMIT:
        raise SizeLimitError(f"{total} valuations exceed the limit {VALUATION_LIMIT}")
    code = compile_formula(f, props)
    a, world = kernels.first_refuting_valuation(
        code, np.asarray(opens, np.int64), len(props),
        np.asarray(space.i_arrow.table, np.int64),
        np.asarray(space.d_dia.table, np.int64),
        np.asarray(space.e_box.table, np.int64),
        space.full)
    a, world = int(a), int(world)
    if a < 0:
        return ValidityResult(True, f, None, None, total)
    valuation = {}
    rem = a
    for j in range(len(props) - 1, -1, -1):
        valuation[props[j]] = opens[rem % len(opens)]
        rem //= len(opens)
    return ValidityResult(False, f, valuation, world, a + 1)


def valid_on_frame(frame: BirelFrame, f: Formula) -> ValidityResult:
    return valid_on_space(frame_to_space(frame), f)


def describe_validity(res: ValidityResult) -> str:
    if res.valid:
        return f"valid: {render(res.formula)} ({res.valuations_checked} valuations)"
    vals = ", ".join(f"||{p}|| = {set(worlds_of(v)) or '{}'}"
                     for p, v in sorted(res.valuation.items()))
    where = f"world {res.world}"
    return f"invalid: {render(res.formula)} refuted at {where}" + (f" with {vals}" if vals else "")
