"""Frame enumeration, countermodel search, two-relation bisimulation,
irreflexivization by finite index stacking, and depth-bounded equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from . import kernels
from .formula import And, BOT, Box, Diamond, Formula, Implies, Or, Prop, modal_depth, render
from .hilbert import Logic
from .relframe import BirelFrame, Relation, SizeLimitError, mask_of
from .semantics import (
    BirelModel, compile_bank, extension, relational_extension, valid_on_frame,
)

__all__ = [
    "ENUM_WORLD_LIMIT", "preorder_masks", "transitive_masks",
    "enumerate_frame_masks", "enumerate_frames", "CountermodelResult",
    "find_countermodel", "largest_bisimulation", "irreflexivize",
    "canonical_formulas", "EquivalenceResult", "depth_bounded_equivalence",
    "upset_masks",
]

ENUM_WORLD_LIMIT = 4
DEPTH_LIMIT = 3


@lru_cache(maxsize=None)
def transitive_masks(n: int) -> tuple[int, ...]:
    """All transitive relations on n labeled worlds, as ascending bitmasks."""
    full = (1 << n) - 1
    out = []
    for mask in range(1 << (n * n)):
        rows = [(mask >> (n * i)) & full for i in range(n)]
        ok = True
        for i in range(n):
            acc = 0
            for j in range(n):
                if (rows[i] >> j) & 1:
                    acc |= rows[j]
            if acc & ~rows[i]:
                ok = False
                break
        if ok:
            out.append(mask)
    return tuple(out)


@lru_cache(maxsize=None)
def preorder_masks(n: int) -> tuple[int, ...]:
    """All preorders on n labeled worlds, as ascending bitmasks."""
    diag = sum(1 << (n * i + i) for i in range(n))
    return tuple(m for m in transitive_masks(n) if m & diag == diag)


def enumerate_frame_masks(n: int, cls: Optional[Logic] = None,
                          limit: int = ENUM_WORLD_LIMIT) -> Iterator[tuple[int, int]]:
    """(pre, mod) bitmask pairs of the frame class, in lexicographic order."""
    if n > limit:
        raise SizeLimitError(f"enumeration limited to {limit} worlds, asked for {n}")
    for pre_mask in preorder_masks(n):
        pre_rows = kernels.unpack_rows(pre_mask, n)
        for mod_mask in transitive_masks(n):
            if cls is not None and cls is not Logic.CK4:
                flags = int(kernels.frame_flags(pre_rows, kernels.unpack_rows(mod_mask, n),
                                                (1 << n) - 1))
                if not _flags_in_class(flags, cls):
                    continue
            yield pre_mask, mod_mask


def _flags_in_class(flags: int, cls: Logic) -> bool:
    fwd = flags & kernels.FLAG_FORWARD
    bwd = flags & kernels.FLAG_BACKWARD
    dwn = flags & kernels.FLAG_DOWNWARD
    lin = flags & kernels.FLAG_LOCLIN
    refl = flags & kernels.FLAG_MOD_REFLEXIVE
    ik4 = fwd and bwd
    k4i = fwd and dwn
    gk4 = ik4 and lin
    table = {
        Logic.CK4: True,
        Logic.IK4: ik4,
        Logic.K4I: k4i,
        Logic.GK4: gk4,
        Logic.GK4C: gk4 and dwn,
        Logic.CS4: refl,
        Logic.IS4: refl and ik4,
        Logic.S4I: refl and k4i,
        Logic.GS4: refl and gk4,
        Logic.GS4C: refl and gk4 and dwn,
    }
    return bool(table[cls])


def enumerate_frames(n: int, cls: Optional[Logic] = None,
                     limit: int = ENUM_WORLD_LIMIT) -> Iterator[BirelFrame]:
    for pre_mask, mod_mask in enumerate_frame_masks(n, cls, limit):
        yield BirelFrame(n, Relation.from_mask(pre_mask, n), Relation.from_mask(mod_mask, n))


def upset_masks(pre_rows: Sequence[int], n: int) -> tuple[int, ...]:
    """Ascending bitmasks of the pre-upward-closed world sets."""
    return tuple(u for u in range(1 << n)
                 if all(not ((u >> w) & 1) or int(pre_rows[w]) & ~u == 0 for w in range(n)))


@dataclass(frozen=True)
class CountermodelResult:
    formula: Formula
    logic: Logic
    model: Optional[BirelModel]
    world: Optional[int]
    frames_enumerated: int
    valuations_checked: int

    @property
    def found(self) -> bool:
        return self.model is not None


def find_countermodel(f: Formula, cls: Logic, max_worlds: int,
                      limit: int = ENUM_WORLD_LIMIT) -> CountermodelResult:
    """First refuting model in enumeration order (frames, then valuations,
    then worlds, all lexicographic).  A found witness is re-verified by both
    evaluators before being returned."""
    if max_worlds > limit:
        raise SizeLimitError(f"search limited to {limit} worlds, asked for {max_worlds}")
    frames = 0
    valuations = 0
    for n in range(1, max_worlds + 1):
        for pre_mask, mod_mask in enumerate_frame_masks(n, cls, limit):
            frames += 1
            frame = BirelFrame(n, Relation.from_mask(pre_mask, n),
                               Relation.from_mask(mod_mask, n))
            res = valid_on_frame(frame, f)
            valuations += res.valuations_checked
            if not res.valid:
                model = BirelModel(frame, res.valuation)
                full = (1 << n) - 1
                ext_op = extension(model, f)
                ext_rel = relational_extension(model, f)
                if ext_op != ext_rel:
                    raise AssertionError(
                        f"evaluator disagreement on countermodel: {ext_op} vs {ext_rel}")
                if (ext_op >> res.world) & 1 or ext_op == full:
                    raise AssertionError("countermodel failed re-verification")
                return CountermodelResult(f, cls, model, res.world, frames, valuations)
    return CountermodelResult(f, cls, None, None, frames, valuations)


# ---------------------------------------------------------------------------
# Bisimulation
# ---------------------------------------------------------------------------

def _zigzag_ok(pairs: set[tuple[int, int]], r1: Relation, r2: Relation,
               w: int, v: int) -> bool:
    for u in range(r1.n):
        if (r1.rows[w] >> u) & 1 and not any(
                (r2.rows[v] >> u2) & 1 and (u, u2) in pairs for u2 in range(r2.n)):
            return False
    for u2 in range(r2.n):
        if (r2.rows[v] >> u2) & 1 and not any(
                (r1.rows[w] >> u) & 1 and (u, u2) in pairs for u in range(r1.n)):
            return False
    return True


def largest_bisimulation(m1: BirelModel, m2: BirelModel) -> frozenset[tuple[int, int]]:
    """Greatest two-relation bisimulation: start from atom-agreeing pairs and
    delete pairs whose zig-zag fails for either relation, to a fixpoint."""
    props = sorted(set(m1.valuation) | set(m2.valuation))
    pairs = {
        (w, v)
        for w in range(m1.n)
        for v in range(m2.n)
        if all(((m1.valuation.get(p, 0) >> w) & 1) == ((m2.valuation.get(p, 0) >> v) & 1)
               for p in props)
    }
    changed = True
    while changed:
        changed = False
        for w, v in sorted(pairs):
            if not (_zigzag_ok(pairs, m1.frame.pre, m2.frame.pre, w, v)
                    and _zigzag_ok(pairs, m1.frame.mod, m2.frame.mod, w, v)):
                pairs.discard((w, v))
                changed = True
    return frozenset(pairs)


# ---------------------------------------------------------------------------
# Irreflexivization (finite index stacking)
# ---------------------------------------------------------------------------

def irreflexivize(m: BirelModel, k: int) -> BirelModel:
    """Stack k indexed copies: pre ignores indices, mod additionally demands a
    strictly increasing index.  World (w, i) maps to index w*k + i.  The modal
    relation of the output is irreflexive and transitive; confluence survives
    only where index headroom exists (check with a restricted universe)."""
    if k < 1:
        raise ValueError("need at least one copy")
    n = m.frame.n
    if n * k > 16:
        raise SizeLimitError(f"{n * k} worlds exceed the 16-world limit")
    pre_pairs = []
    mod_pairs = []
    for w in range(n):
        for v in range(n):
            for i in range(k):
                for j in range(k):
                    if (m.frame.pre.rows[w] >> v) & 1:
                        pre_pairs.append((w * k + i, v * k + j))
                    if (m.frame.mod.rows[w] >> v) & 1 and i < j:
                        mod_pairs.append((w * k + i, v * k + j))
    frame = BirelFrame(n * k, Relation(n * k, pre_pairs), Relation(n * k, mod_pairs))
    valuation = {
        p: mask_of(w * k + i for w in range(n) for i in range(k) if (v >> w) & 1)
        for p, v in m.valuation.items()
    }
    return BirelModel(frame, valuation)


def stack_interior_universe(n: int, k: int) -> int:
    """Worlds (w, i) with index i strictly inside 0..k-1; on these the
    truncation has both upward and downward index headroom."""
    return mask_of(w * k + i for w in range(n) for i in range(1, k - 1))


# ---------------------------------------------------------------------------
# Canonical formula generation and depth-bounded equivalence
# ---------------------------------------------------------------------------

def _formula_key(f: Formula) -> tuple:
    return (render(f),)


@lru_cache(maxsize=None)
def canonical_formulas(props: tuple[str, ...], max_depth: int,
                       max_connectives: int = 2) -> tuple[Formula, ...]:
    """Deterministic formula basis: all formulas over ``props`` with at most
    ``max_connectives`` connectives and modal depth at most ``max_depth``.
    Conjunctions and disjunctions are kept in sorted normal form (strictly
    increasing operands), pruning commutative duplicates."""
    layers: list[list[Formula]] = [[BOT] + [Prop(p) for p in sorted(props)]]
    for size in range(1, max_connectives + 1):
        layer: list[Formula] = []
        for g in layers[size - 1]:
            layer.append(Box(g))
            layer.append(Diamond(g))
        for left_size in range(size):
            right_size = size - 1 - left_size
            for a in layers[left_size]:
                for b in layers[right_size]:
                    layer.append(Implies(a, b))
                    if (left_size, _formula_key(a)) < (right_size, _formula_key(b)):
                        layer.append(And(a, b))
                        layer.append(Or(a, b))
        layers.append(sorted(set(layer), key=_formula_key))
    out = [f for layer in layers for f in layer if modal_depth(f) <= max_depth]
    return tuple(out)


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    separating: Optional[Formula]
    formulas_checked: int


@lru_cache(maxsize=None)
def compiled_canonical_bank(props: tuple[str, ...], max_depth: int,
                            max_connectives: int = 2):
    formulas = canonical_formulas(props, max_depth, max_connectives)
    return formulas, compile_bank(formulas, props)


def bank_extensions(m: BirelModel, props: Sequence[str], bank) -> np.ndarray:
    """Relational extensions of a compiled formula bank, one mask per formula."""
    code, starts, ends = bank
    vals = np.array([[m.valuation.get(p, 0)] for p in props], np.int64)
    if not len(props):
        vals = np.zeros((1, 1), np.int64)
    frame = m.frame
    out = kernels.bank_eval_relational(code, starts, ends, vals,
                                       frame.pre.row_array(), frame.mod.row_array(),
                                       frame.lead.row_array(), (1 << frame.n) - 1)
    return out[:, 0]


def depth_bounded_equivalence(m1: BirelModel, w1: int, m2: BirelModel, w2: int,
                              depth: int, props: Sequence[str],
                              max_connectives: int = 2,
                              depth_limit: int = DEPTH_LIMIT) -> EquivalenceResult:
    """Check agreement of the two pointed models on every canonical formula
    over ``props`` with modal depth at most ``depth``; returns the first
    separating formula in canonical order, if any."""
    if depth > depth_limit:
        raise SizeLimitError(f"depth {depth} exceeds the limit {depth_limit}")
    ordered = tuple(sorted(props))
    formulas, bank = compiled_canonical_bank(ordered, depth, max_connectives)
    bits1 = (bank_extensions(m1, ordered, bank) >> w1) & 1
    bits2 = (bank_extensions(m2, ordered, bank) >> w2) & 1
    diff = np.nonzero(bits1 != bits2)[0]
    if len(diff):
        return EquivalenceResult(False, formulas[int(diff[0])], len(formulas))
    return EquivalenceResult(True, None, len(formulas))
