"""Finite birelational frames and relation algebra over bitmask world-sets.

World-sets are Python ints (bit ``w`` set iff world ``w`` is in the set).
Relations store both their pair set and per-world successor rows; the row
form feeds the kernel backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import kernels

MAX_WORLDS = 16


class SizeLimitError(ValueError):
    """Raised when an exhaustive sweep would exceed the configured limit."""


def mask_of(worlds: Iterable[int]) -> int:
    mask = 0
    for w in worlds:
        mask |= 1 << w
    return mask


def worlds_of(mask: int) -> tuple[int, ...]:
    out = []
    w = 0
    while mask >> w:
        if (mask >> w) & 1:
            out.append(w)
        w += 1
    return tuple(out)


class Relation:
    """Binary relation on {0..n-1}, stored as pairs plus successor rows."""

    __slots__ = ("n", "pairs", "rows")

    def __init__(self, n: int, pairs: Iterable[tuple[int, int]] = ()):
        if not 1 <= n <= MAX_WORLDS:
            raise SizeLimitError(f"world count must be in 1..{MAX_WORLDS}, got {n}")
        pairs = frozenset(pairs)
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"pair ({i}, {j}) out of range for {n} worlds")
        self.n = n
        self.pairs = pairs
        rows = [0] * n
        for i, j in pairs:
            rows[i] |= 1 << j
        self.rows = tuple(rows)

    @classmethod
    def from_rows(cls, rows: Iterable[int]) -> Relation:
        rows = list(rows)
        pairs = [(i, j) for i, r in enumerate(rows) for j in range(len(rows)) if (int(r) >> j) & 1]
        return cls(len(rows), pairs)

    @classmethod
    def from_mask(cls, mask: int, n: int) -> Relation:
        full = (1 << n) - 1
        return cls.from_rows([(mask >> (n * i)) & full for i in range(n)])

    @classmethod
    def identity(cls, n: int) -> Relation:
        return cls(n, [(i, i) for i in range(n)])

    @classmethod
    def empty(cls, n: int) -> Relation:
        return cls(n, [])

    @property
    def mask(self) -> int:
        return int(kernels.pack_rows(self.row_array()))

    def row_array(self) -> np.ndarray:
        return np.array(self.rows, np.int64)

    def __eq__(self, other) -> bool:
        return isinstance(other, Relation) and self.n == other.n and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash((self.n, self.pairs))

    def __repr__(self) -> str:
        return f"Relation({self.n}, {sorted(self.pairs)})"

    def is_reflexive(self) -> bool:
        return all((r >> i) & 1 for i, r in enumerate(self.rows))

    def is_irreflexive(self) -> bool:
        return not any((r >> i) & 1 for i, r in enumerate(self.rows))

    def is_transitive(self) -> bool:
        return closure(self, "transitive") == self

    def transpose(self) -> Relation:
        return Relation(self.n, [(j, i) for i, j in self.pairs])


def compose(r: Relation, s: Relation) -> Relation:
    """Relational composition: a (R;S) c iff a R b S c for some b."""
    if r.n != s.n:
        raise ValueError(f"world counts differ: {r.n} vs {s.n}")
    return Relation.from_rows(kernels.compose_rows(r.row_array(), s.row_array()))


def closure(r: Relation, kind: str) -> Relation:
    if kind == "transitive":
        return Relation.from_rows(kernels.transitive_closure_rows(r.row_array()))
    if kind == "reflexive-transitive":
        return Relation.from_rows(kernels.reflexive_transitive_closure_rows(r.row_array()))
    raise ValueError(f"unknown closure kind {kind!r}")


def relational_operators(r: Relation) -> tuple[Callable[[int], int], Callable[[int], int]]:
    """The preimage derivative d_R(A) = {w : exists v, wRv and v in A} and its
    dual integral e_R."""
    rows = r.rows
    full = (1 << r.n) - 1

    def d(a: int) -> int:
        return mask_of(w for w in range(r.n) if rows[w] & a)

    def e(a: int) -> int:
        return full & ~d(full & ~a)

    return d, e


class BirelFrame:
    """Worlds with an intuitionistic preorder and a transitive modal relation."""

    __slots__ = ("n", "pre", "mod", "_lead")

    def __init__(self, n: int, pre: Relation, mod: Relation):
        if pre.n != n or mod.n != n:
            raise ValueError("relation world counts do not match the frame")
        if not pre.is_reflexive():
            w = next(i for i, r in enumerate(pre.rows) if not (r >> i) & 1)
            raise ValueError(f"pre is not reflexive: missing ({w}, {w})")
        if not pre.is_transitive():
            raise ValueError("pre is not transitive")
        if not mod.is_transitive():
            raise ValueError("mod is not transitive")
        self.n = n
        self.pre = pre
        self.mod = mod
        self._lead: Relation | None = None

    @classmethod
    def from_edges(cls, n: int, pre_edges: Iterable[tuple[int, int]],
                   mod_edges: Iterable[tuple[int, int]]) -> BirelFrame:
        """Close generator edges (pre reflexive-transitively, mod transitively)."""
        pre = closure(Relation(n, pre_edges), "reflexive-transitive")
        mod = closure(Relation(n, mod_edges), "transitive")
        return cls(n, pre, mod)

    @property
    def lead(self) -> Relation:
        """The relation interpreting box: transitive closure of pre;mod."""
        if self._lead is None:
            self._lead = closure(compose(self.pre, self.mod), "transitive")
        return self._lead

    def __eq__(self, other) -> bool:
        return (isinstance(other, BirelFrame) and self.n == other.n
                and self.pre == other.pre and self.mod == other.mod)

    def __hash__(self) -> int:
        return hash((self.n, self.pre, self.mod))

    def __repr__(self) -> str:
        return f"BirelFrame({self.n}, pre={sorted(self.pre.pairs)}, mod={sorted(self.mod.pairs)})"


def lead_relation(f: BirelFrame) -> Relation:
    return f.lead


@dataclass(frozen=True)
class FrameProperties:
    forward_confluent: bool
    backward_confluent: bool
    downward_confluent: bool
    locally_linear: bool
    mod_reflexive: bool
    mod_irreflexive: bool


def frame_properties(f: BirelFrame, universe: int | None = None) -> FrameProperties:
    """Direct quantifier evaluation of the confluence conditions.

    ``universe`` restricts the universally quantified worlds (witnesses may
    still come from anywhere); used for truncation-aware confluence checks.
    """
    mask = (1 << f.n) - 1 if universe is None else universe
    flags = int(kernels.frame_flags(f.pre.row_array(), f.mod.row_array(), mask))
    return FrameProperties(
        forward_confluent=bool(flags & kernels.FLAG_FORWARD),
        backward_confluent=bool(flags & kernels.FLAG_BACKWARD),
        downward_confluent=bool(flags & kernels.FLAG_DOWNWARD),
        locally_linear=bool(flags & kernels.FLAG_LOCLIN),
        mod_reflexive=bool(flags & kernels.FLAG_MOD_REFLEXIVE),
        mod_irreflexive=bool(flags & kernels.FLAG_MOD_IRREFLEXIVE),
    )


def classify_frame(f: BirelFrame):
    """Frame classes for the ten logics (set of Logic members)."""
    from .hilbert import Logic

    p = frame_properties(f)
    classes = {Logic.CK4}
    ik4 = p.forward_confluent and p.backward_confluent
    k4i = p.forward_confluent and p.downward_confluent
    gk4 = ik4 and p.locally_linear
    gk4c = gk4 and p.downward_confluent
    if ik4:
        classes.add(Logic.IK4)
    if k4i:
        classes.add(Logic.K4I)
    if gk4:
        classes.add(Logic.GK4)
    if gk4c:
        classes.add(Logic.GK4C)
    if p.mod_reflexive:
        classes.add(Logic.CS4)
        if ik4:
            classes.add(Logic.IS4)
        if k4i:
            classes.add(Logic.S4I)
        if gk4:
            classes.add(Logic.GS4)
        if gk4c:
            classes.add(Logic.GS4C)
    return frozenset(classes)
