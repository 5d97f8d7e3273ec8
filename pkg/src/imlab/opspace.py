"""Extensional set-operators and polyderivative spaces.

Operators are stored as full powerset tables (hard limit 16 worlds), so the
defining laws and the regularity predicates are decidable by exhaustive
sweeps over all subsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import kernels
from .hilbert import Logic
from .relframe import MAX_WORLDS, BirelFrame, SizeLimitError

__all__ = [
    "SetOperator", "OperatorSpace", "LawViolation", "LawReport",
    "OperatorLawError", "law_report", "dualize", "opens_of",
    "interior_from_opens", "SpaceClassification", "space_classify",
    "frame_to_space",
]


class SetOperator:
    """Total map from subsets of {0..n-1} to subsets, tabulated."""

    __slots__ = ("n", "table")

    def __init__(self, n: int, table: Sequence[int]):
        if not 1 <= n <= MAX_WORLDS:
            raise SizeLimitError(f"world count must be in 1..{MAX_WORLDS}, got {n}")
        full = (1 << n) - 1
        table = tuple(int(x) for x in table)
        if len(table) != 1 << n:
            raise ValueError(f"table must have {1 << n} entries, got {len(table)}")
        if any(x & ~full for x in table):
            raise ValueError("table entry out of range")
        self.n = n
        self.table = table

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int], int]) -> "SetOperator":
        return cls(n, [fn(a) for a in range(1 << n)])

    def __call__(self, mask: int) -> int:
        return self.table[mask]

    def __eq__(self, other) -> bool:
        return isinstance(other, SetOperator) and self.n == other.n and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.n, self.table))

    def __repr__(self) -> str:
        return f"SetOperator({self.n}, {self.table})"


@dataclass(frozen=True)
class LawViolation:
    law: str
    witness: tuple[int, ...]


@dataclass(frozen=True)
class LawReport:
    kind: str
    violations: tuple[LawViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


class OperatorLawError(ValueError):
    def __init__(self, report: LawReport):
        first = report.violations[0]
        super().__init__(f"operator fails {report.kind} law {first.law} at {first.witness}")
        self.report = report


def _first(op: SetOperator, law: str, pred) -> LawViolation | None:
    """First witness (lexicographic in the subset masks) violating pred."""
    n_sub = 1 << op.n
    if law in ("additive", "multiplicative"):
        for a in range(n_sub):
            for b in range(n_sub):
                if not pred(a, b):
                    return LawViolation(law, (a, b))
        return None
    for a in range(n_sub):
        if not pred(a):
            return LawViolation(law, (a,))
    return None


def law_report(op: SetOperator, kind: str) -> LawReport:
    """Check the operator laws of the given kind over every subset (pair)."""
    full = (1 << op.n) - 1
    t = op.table
    checks: list[LawViolation | None] = []
    if kind in ("derivative", "closure"):
        checks.append(LawViolation("empty", ()) if t[0] != 0 else None)
        checks.append(_first(op, "additive", lambda a, b: t[a | b] == t[a] | t[b]))
        checks.append(_first(op, "idempotent-shrinking", lambda a: t[t[a]] & ~t[a] == 0))
        if kind == "closure":
            checks.append(_first(op, "inflationary", lambda a: a & ~t[a] == 0))
    elif kind in ("integral", "interior"):
        checks.append(LawViolation("top", (full,)) if t[full] != full else None)
        checks.append(_first(op, "multiplicative", lambda a, b: t[a & b] == t[a] & t[b]))
        checks.append(_first(op, "idempotent-swelling", lambda a: t[a] & ~t[t[a]] == 0))
        if kind == "interior":
            checks.append(_first(op, "deflationary", lambda a: t[a] & ~a == 0))
    else:
        raise ValueError(f"unknown operator kind {kind!r}")
    return LawReport(kind, tuple(v for v in checks if v is not None))


def dualize(op: SetOperator) -> SetOperator:
    full = (1 << op.n) - 1
    return SetOperator(op.n, [full & ~op.table[full & ~a] for a in range(1 << op.n)])


def opens_of(op: SetOperator, kind: str) -> frozenset[int]:
    """Open sets of the operator: fixpoint-expanding sets for an integral
    operator, complements of d-closed sets for a derivative operator."""
    report = law_report(op, "integral" if kind == "integral" else "derivative")
    if not report.ok:
        raise OperatorLawError(report)
    full = (1 << op.n) - 1
    if kind == "integral":
        opens = frozenset(a for a in range(1 << op.n) if a & ~op.table[a] == 0)
    elif kind == "derivative":
        opens = frozenset(full & ~a for a in range(1 << op.n) if op.table[a] & ~a == 0)
    else:
        raise ValueError(f"unknown operator kind {kind!r}")
    _check_topology(opens, op.n)
    return opens


def _check_topology(opens: frozenset[int], n: int) -> None:
    full = (1 << n) - 1
    if 0 not in opens or full not in opens:
        raise ValueError("opens lack the empty or full set")
    for a in opens:
        for b in opens:
            if a | b not in opens or a & b not in opens:
                raise ValueError(f"opens not closed under union/intersection at ({a}, {b})")


def interior_from_opens(opens: Iterable[int], a: int) -> int:
    """Largest union of opens inside ``a``."""
    acc = 0
    for u in opens:
        if u & ~a == 0:
            acc |= u
    return acc


@dataclass(frozen=True)
class OperatorSpace:
    """Interior/derivative/integral operator triple over one world set."""

    n: int
    i_arrow: SetOperator
    d_dia: SetOperator
    e_box: SetOperator

    def __post_init__(self):
        for name, op in (("i_arrow", self.i_arrow), ("d_dia", self.d_dia), ("e_box", self.e_box)):
            if op.n != self.n:
                raise ValueError(f"{name} has {op.n} worlds, space has {self.n}")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def opens(self) -> frozenset[int]:
        """The implication topology: fixpoints of the interior operator."""
        return frozenset(a for a in range(1 << self.n) if self.i_arrow.table[a] == a)

    def law_violations(self) -> tuple[str, ...]:
        """Violations of the defining laws and composition constraints."""
        problems = []
        for name, op, kind in (("i_arrow", self.i_arrow, "interior"),
                               ("d_dia", self.d_dia, "derivative"),
                               ("e_box", self.e_box, "integral")):
            rep = law_report(op, kind)
            for v in rep.violations:
                problems.append(f"{name} fails {v.law} at {v.witness}")
        if problems:
            return tuple(problems)
        it, dt, et = self.i_arrow.table, self.d_dia.table, self.e_box.table
        dia_opens = opens_of(self.d_dia, "derivative")
        for a in range(1 << self.n):
            ei = et[it[a]]
            if ei != it[et[it[a]]]:
                problems.append(f"e_box i_arrow != i_arrow e_box i_arrow at {a}")
                break
        for a in range(1 << self.n):
            ei = et[it[a]]
            if ei != interior_from_opens(dia_opens, ei):
                problems.append(f"e_box i_arrow not open in the diamond topology at {a}")
                break
        return tuple(problems)


@dataclass(frozen=True)
class SpaceClassification:
    law_violations: tuple[str, ...]
    diamond_coarse: bool
    diamond_regular: bool
    box_regular: bool
    extremally_disconnected: bool
    ed_literal_equation: bool
    hereditarily_ed: bool
    cs4: bool
    classes: frozenset[Logic]


def _subspace_ed(opens: frozenset[int], c_arrow: Sequence[int], s: int) -> bool:
    sub_opens = {u & s for u in opens}
    return all(s & c_arrow[u] in sub_opens for u in sub_opens)


def space_classify(s: OperatorSpace) -> SpaceClassification:
    """Regularity flags of the space, each verified over all subsets, plus
    the derived logic classes."""
    violations = s.law_violations()
    n_sub = 1 << s.n
    full = s.full
    it, dt, et = s.i_arrow.table, s.d_dia.table, s.e_box.table
    e_dia = [full & ~dt[full & ~a] for a in range(n_sub)]
    c_arrow = [full & ~it[full & ~a] for a in range(n_sub)]

    coarse = all(it[e_dia[a]] == et[it[a]] for a in range(n_sub))
    dreg = all(dt[it[a]] == it[dt[it[a]]] for a in range(n_sub))
    breg = all(e_dia[it[a]] == et[it[a]] for a in range(n_sub))
    arrow_opens = frozenset(a for a in range(n_sub) if it[a] == a)
    ed = all(c_arrow[u] in arrow_opens for u in arrow_opens)
    ed_literal = all(c_arrow[it[a]] == it[a] for a in range(n_sub))
    hed = all(_subspace_ed(arrow_opens, c_arrow, sub) for sub in range(n_sub))
    cs4 = (law_report(s.d_dia, "closure").ok and law_report(s.e_box, "interior").ok)

    classes: set[Logic] = set()
    if not violations:
        classes.add(Logic.CK4)
        ik4 = coarse and dreg
        k4i = breg and dreg
        gk4 = hed and ik4
        gk4c = breg and gk4
        for ok, logic in ((ik4, Logic.IK4), (k4i, Logic.K4I), (gk4, Logic.GK4),
                          (gk4c, Logic.GK4C)):
            if ok:
                classes.add(logic)
        if cs4:
            classes.add(Logic.CS4)
            for ok, logic in ((ik4, Logic.IS4), (k4i, Logic.S4I), (gk4, Logic.GS4),
                              (gk4c, Logic.GS4C)):
                if ok:
                    classes.add(logic)
    return SpaceClassification(
        law_violations=violations,
        diamond_coarse=coarse,
        diamond_regular=dreg,
        box_regular=breg,
        extremally_disconnected=ed,
        ed_literal_equation=ed_literal,
        hereditarily_ed=hed,
        cs4=cs4,
        classes=frozenset(classes),
    )


def frame_to_space(f: BirelFrame) -> OperatorSpace:
    """The operator space of a frame: up-set interior for implication, modal
    preimage derivative for diamond, lead-relation integral for box."""
    itab, dtab, etab = kernels.space_tables(
        f.pre.row_array(), f.mod.row_array(), f.lead.row_array())
    return OperatorSpace(
        f.n,
        SetOperator(f.n, itab.tolist()),
        SetOperator(f.n, dtab.tolist()),
        SetOperator(f.n, etab.tolist()),
    )
