"""Finite topologies: validation, Alexandroff construction, meets, Cantor
derivative machinery, tritopological spaces, and induced operator spaces.

Topologies are explicit open-set families over bitmask subsets.  Every finite
topology is Alexandroff, so minimal open neighborhoods exist and drive the
Cantor operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

from .opspace import OperatorSpace, SetOperator, interior_from_opens
from .relframe import MAX_WORLDS, BirelFrame, Relation, SizeLimitError, worlds_of

__all__ = [
    "FiniteTopology", "TriTopSpace", "TopologyError", "TdViolation",
    "alexandroff", "meet", "CantorOperators", "cantor_ops",
    "TopoProperties", "topo_properties", "frame_to_tritop",
    "bitop_to_tritop", "induce", "enumerate_topologies",
    "parse_topology", "format_topology",
]

ENUM_POINT_LIMIT = 4


class TopologyError(ValueError):
    pass


class FiniteTopology:
    """A family of open subsets of {0..n-1}, validated on construction."""

    __slots__ = ("n", "opens", "_min_nbhd")

    def __init__(self, n: int, opens: Iterable[int]):
        if not 1 <= n <= MAX_WORLDS:
            raise SizeLimitError(f"point count must be in 1..{MAX_WORLDS}, got {n}")
        full = (1 << n) - 1
        opens = frozenset(int(u) for u in opens)
        for u in opens:
            if u & ~full:
                raise TopologyError(f"open set {u:#x} out of range for {n} points")
        if 0 not in opens:
            raise TopologyError("the empty set is not open")
        for a in sorted(opens):
            for b in sorted(opens):
                if a | b not in opens:
                    raise TopologyError(f"union of opens {worlds_of(a)} and {worlds_of(b)} is not open")
                if a & b not in opens:
                    raise TopologyError(f"intersection of opens {worlds_of(a)} and {worlds_of(b)} is not open")
        if full not in opens:
            raise TopologyError("the full set is not open")
        self.n = n
        self.opens = opens
        mins = []
        for x in range(n):
            acc = full
            for u in opens:
                if (u >> x) & 1:
                    acc &= u
            mins.append(acc)
        self._min_nbhd = tuple(mins)

    @classmethod
    def discrete(cls, n: int) -> "FiniteTopology":
        return cls(n, range(1 << n))

    @classmethod
    def indiscrete(cls, n: int) -> "FiniteTopology":
        return cls(n, (0, (1 << n) - 1))

    def min_nbhd(self, x: int) -> int:
        """Smallest open set containing x (exists since the space is finite)."""
        return self._min_nbhd[x]

    def interior(self, a: int) -> int:
        return interior_from_opens(self.opens, a)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteTopology) and self.n == other.n and self.opens == other.opens

    def __hash__(self) -> int:
        return hash((self.n, self.opens))

    def __repr__(self) -> str:
        shown = [worlds_of(u) for u in sorted(self.opens)]
        return f"FiniteTopology({self.n}, {shown})"


def alexandroff(r: Relation) -> FiniteTopology:
    """Topology whose opens are the sets closed under R-successors."""
    rows = r.rows
    opens = [u for u in range(1 << r.n)
             if all(not ((u >> w) & 1) or rows[w] & ~u == 0 for w in range(r.n))]
    return FiniteTopology(r.n, opens)


def meet(t1: FiniteTopology, t2: FiniteTopology) -> FiniteTopology:
    """Greatest lower bound of two topologies: the intersection family."""
    if t1.n != t2.n:
        raise ValueError(f"point counts differ: {t1.n} vs {t2.n}")
    return FiniteTopology(t1.n, t1.opens & t2.opens)


class CantorOperators(NamedTuple):
    derivative: SetOperator
    closure: SetOperator
    interior: SetOperator
    integral: SetOperator


def cantor_ops(t: FiniteTopology) -> CantorOperators:
    """Cantor derivative (punctured-neighborhood limit points), closure,
    interior, and the integral dual of the derivative."""
    n = t.n
    full = (1 << n) - 1

    def d(a: int) -> int:
        out = 0
        for x in range(n):
            if t.min_nbhd(x) & ~(1 << x) & a:
                out |= 1 << x
        return out

    dtab = [d(a) for a in range(1 << n)]
    ctab = [a | dtab[a] for a in range(1 << n)]
    itab = [full & ~ctab[full & ~a] for a in range(1 << n)]
    etab = [full & ~dtab[full & ~a] for a in range(1 << n)]
    return CantorOperators(
        SetOperator(n, dtab), SetOperator(n, ctab),
        SetOperator(n, itab), SetOperator(n, etab),
    )


@dataclass(frozen=True)
class TopoProperties:
    t_d: bool
    extremally_disconnected: bool
    hereditarily_ed: bool
    scattered: bool


def topo_properties(t: FiniteTopology) -> TopoProperties:
    n = t.n
    ops = cantor_ops(t)
    dtab, ctab = ops.derivative.table, ops.closure.table
    t_d = all(dtab[dtab[a]] & ~dtab[a] == 0 for a in range(1 << n))
    ed = all(ctab[u] in t.opens for u in t.opens)

    hed = True
    for s in range(1 << n):
        sub_opens = {u & s for u in t.opens}
        if not all(s & ctab[u] in sub_opens for u in sub_opens):
            hed = False
            break

    scattered = True
    for s in range(1, 1 << n):
        if not any((s >> x) & 1 and t.min_nbhd(x) & s == 1 << x for x in range(n)):
            scattered = False
            break
    return TopoProperties(t_d, ed, hed, scattered)


@dataclass(frozen=True)
class TriTopSpace:
    n: int
    arrow: FiniteTopology
    dia: FiniteTopology
    box: FiniteTopology

    def __post_init__(self):
        for name, t in (("arrow", self.arrow), ("dia", self.dia), ("box", self.box)):
            if t.n != self.n:
                raise ValueError(f"{name} topology has {t.n} points, space has {self.n}")


def frame_to_tritop(f: BirelFrame) -> TriTopSpace:
    return TriTopSpace(f.n, alexandroff(f.pre), alexandroff(f.mod), alexandroff(f.lead))


def bitop_to_tritop(arrow: FiniteTopology, dia: FiniteTopology) -> TriTopSpace:
    """Complete a bitopological space with the meet as the box topology."""
    return TriTopSpace(arrow.n, arrow, dia, meet(arrow, dia))


class TdViolation(ValueError):
    def __init__(self, which: str, witness: int):
        super().__init__(f"{which} topology is not T_d: dd(A) exceeds d(A) "
                         f"for A = {worlds_of(witness)}")
        self.which = which
        self.witness = witness


def _require_td(which: str, t: FiniteTopology) -> None:
    dtab = cantor_ops(t).derivative.table
    for a in range(1 << t.n):
        if dtab[dtab[a]] & ~dtab[a]:
            raise TdViolation(which, a)


def induce(x: TriTopSpace, kind: str) -> OperatorSpace:
    """Operator space of a tritopological space.

    ``closure`` kind interprets diamond/box by topological closure/interior;
    ``derivative`` kind by the Cantor derivative/integral and requires the
    diamond and box topologies to be T_d.
    """
    i_arrow = cantor_ops(x.arrow).interior
    if kind == "closure":
        return OperatorSpace(x.n, i_arrow, cantor_ops(x.dia).closure,
                             cantor_ops(x.box).interior)
    if kind == "derivative":
        _require_td("dia", x.dia)
        _require_td("box", x.box)
        return OperatorSpace(x.n, i_arrow, cantor_ops(x.dia).derivative,
                             cantor_ops(x.box).integral)
    raise ValueError(f"unknown induction kind {kind!r}")


@lru_cache(maxsize=None)
def enumerate_topologies(n: int) -> tuple[FiniteTopology, ...]:
    """All topologies on n labeled points, by brute force over open-set
    families (a family is a bitset over the 2^n subsets)."""
    if not 1 <= n <= ENUM_POINT_LIMIT:
        raise SizeLimitError(f"topology enumeration supports 1..{ENUM_POINT_LIMIT} points")
    nsub = 1 << n
    full = nsub - 1
    out = []
    base = (1 << 0) | (1 << full)  # empty and full sets required
    for fam in range(1 << nsub):
        if fam & base != base:
            continue
        members = [s for s in range(nsub) if (fam >> s) & 1]
        ok = True
        for a in members:
            for b in members:
                if b > a:
                    break
                if not ((fam >> (a | b)) & 1 and (fam >> (a & b)) & 1):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(FiniteTopology(n, members))
    return tuple(out)


# ---------------------------------------------------------------------------
# File format: `worlds <n>` then one `open <world indices>` line per open set.
# ---------------------------------------------------------------------------

def parse_topology(text: str) -> FiniteTopology:
    n = None
    opens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "worlds":
            if n is not None or len(words) != 2 or not words[1].isdigit():
                raise TopologyError(f"line {lineno}: bad worlds line")
            n = int(words[1])
        elif words[0] == "open":
            if n is None:
                raise TopologyError(f"line {lineno}: 'open' before 'worlds'")
            try:
                idx = [int(w) for w in words[1:]]
            except ValueError:
                raise TopologyError(f"line {lineno}: bad world index") from None
            if any(not 0 <= i < n for i in idx):
                raise TopologyError(f"line {lineno}: world index out of range")
            opens.append(sum(1 << i for i in set(idx)))
        else:
            raise TopologyError(f"line {lineno}: unknown directive {words[0]!r}")
    if n is None:
        raise TopologyError("missing worlds line")
    return FiniteTopology(n, opens)


def format_topology(t: FiniteTopology) -> str:
    lines = [f"worlds {t.n}"]
    for u in sorted(t.opens):
        lines.append(("open " + " ".join(str(w) for w in worlds_of(u))).strip())
    return "\n".join(lines) + "\n"
