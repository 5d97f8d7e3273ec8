"""Exhaustive verification sweeps over enumerated small structures.

Each sweep quantifies a checkable claim over every frame/topology/space of
bounded size and reports the violations it finds.  The acceptance suite and
the demo commands are thin wrappers over these functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .formula import (
    Formula, Prop, instantiate, metavariables, parse, propositions, render,
)
from .hilbert import Logic, Schema, logic_signature
from .relframe import BirelFrame, Relation, frame_properties
from .search import (
    canonical_formulas, enumerate_frame_masks, irreflexivize, preorder_masks,
    stack_interior_universe, transitive_masks, upset_masks,
)
from .semantics import BirelModel, compile_bank, compile_formula, valid_on_space
from .topo import (
    TdViolation, TriTopSpace, bitop_to_tritop, enumerate_topologies, induce,
    topo_properties,
)

__all__ = [
    "SoundnessReport", "soundness_sweep",
    "OracleReport", "oracle_agreement_sweep",
    "FrameSuiteReport", "frame_law_suite",
    "BoxOverMeetReport", "box_over_meet_sweep", "box_over_meet_countermodel",
    "LoebReport", "loeb_tritop_sweep", "loeb_scattered_sweep", "loeb_refutation",
    "cs4_fixture_formulas", "cs4_fixture_sweep", "formulas_valid_on_class",
    "IrreflexivizationReport", "irreflexivization_sweep",
    "backward_gap_report", "instantiate_with_props",
]

LOEB = parse("[]([]p -> p) -> []p")
BOX_OVER_MEET = parse("[]q -> p | (p -> q)")

#: CS4 fixture formulas: connecting axiom, diamond over conjunction,
#: box collecting conjunction, box spreading into disjunction.
cs4_fixture_formulas = (
    parse("<>(p -> q) -> ([]p -> <>q)"),
    parse("<>(p & q) -> <>p & <>q"),
    parse("[]p & []q -> [](p & q)"),
    parse("[]p | []q -> [](p | q)"),
)

_INSTANCE_PROPS = ("p", "q", "r")


def instantiate_with_props(schema: Schema) -> Formula:
    """Schema instance over distinct propositions (A->p, B->q, C->r)."""
    metas = metavariables(schema.pattern)
    if len(metas) > len(_INSTANCE_PROPS):
        raise ValueError(f"schema {schema.name} has too many metavariables")
    return instantiate(schema.pattern, {m: Prop(p) for m, p in zip(metas, _INSTANCE_PROPS)})


@dataclass(frozen=True)
class Violation:
    description: str
    frame: Optional[BirelFrame] = None


def _frame_of(pre_mask: int, mod_mask: int, n: int) -> BirelFrame:
    return BirelFrame(n, Relation.from_mask(pre_mask, n), Relation.from_mask(mod_mask, n))


def _frame_tables(pre_mask: int, mod_mask: int, n: int):
    pre = kernels.unpack_rows(pre_mask, n)
    mod = kernels.unpack_rows(mod_mask, n)
    lead = kernels.transitive_closure_rows(kernels.compose_rows(pre, mod))
    return pre, mod, lead, kernels.space_tables(pre, mod, lead)


# ---------------------------------------------------------------------------
# Soundness: every axiom valid on every frame of its logic
# ---------------------------------------------------------------------------

@dataclass
class SoundnessReport:
    logic: Logic
    max_worlds: int
    frames: int = 0
    checks: int = 0
    valuations: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def soundness_sweep(logic: Logic, max_worlds: int = 3) -> SoundnessReport:
    """Validate every axiom-schema instance of the logic on every labeled
    frame of the logic's class, under every open-set valuation."""
    report = SoundnessReport(logic, max_worlds)
    compiled = []
    for schema in logic_signature(logic):
        inst = instantiate_with_props(schema)
        props = propositions(inst)
        compiled.append((schema.name, inst, props, compile_formula(inst, props)))
    for n in range(1, max_worlds + 1):
        full = (1 << n) - 1
        for pre_mask, mod_mask in enumerate_frame_masks(n, logic):
            report.frames += 1
            pre, mod, lead, (itab, dtab, etab) = _frame_tables(pre_mask, mod_mask, n)
            opens = np.asarray(upset_masks([int(r) for r in pre], n), np.int64)
            for name, inst, props, code in compiled:
                report.checks += 1
                a, world = kernels.first_refuting_valuation(
                    code, opens, len(props), itab, dtab, etab, full)
                report.valuations += len(opens) ** len(props) if a < 0 else int(a) + 1
                if int(a) >= 0:
                    report.violations.append(Violation(
                        f"{name} instance {render(inst)} refuted at world {int(world)} "
                        f"(assignment {int(a)})",
                        _frame_of(pre_mask, mod_mask, n)))
    return report


# ---------------------------------------------------------------------------
# Evaluator agreement: operator route vs relational oracle
# ---------------------------------------------------------------------------

@dataclass
class OracleReport:
    max_worlds: int
    formulas: int
    frames: int = 0
    comparisons: int = 0
    mismatches: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def oracle_agreement_sweep(max_worlds: int = 3, props: Sequence[str] = ("p", "q"),
                           max_depth: int = 2, max_connectives: int = 2,
                           extra_formulas: Sequence[Formula] = ()) -> OracleReport:
    """Exact agreement of the two evaluators on every canonical formula, all
    frames up to the size bound, all open valuations of the propositions."""
    props = tuple(sorted(props))
    formulas = list(canonical_formulas(props, max_depth, max_connectives))
    formulas.extend(extra_formulas)
    code, starts, ends = compile_bank(formulas, props)
    report = OracleReport(max_worlds, len(formulas))
    for n in range(1, max_worlds + 1):
        full = (1 << n) - 1
        for pre_mask, mod_mask in enumerate_frame_masks(n, None):
            report.frames += 1
            pre, mod, lead, (itab, dtab, etab) = _frame_tables(pre_mask, mod_mask, n)
            opens = upset_masks([int(r) for r in pre], n)
            m = len(opens)
            nv = m ** len(props)
            assign = np.arange(nv, dtype=np.int64)
            propmasks = np.zeros((len(props), nv), np.int64)
            rem = assign.copy()
            for j in range(len(props) - 1, -1, -1):
                propmasks[j] = np.asarray(opens, np.int64)[rem % m]
                rem //= m
            out_op = kernels.bank_eval_operator(code, starts, ends, propmasks,
                                                itab, dtab, etab, full)
            out_rel = kernels.bank_eval_relational(code, starts, ends, propmasks,
                                                   pre, mod, lead, full)
            report.comparisons += out_op.size
            if not np.array_equal(out_op, out_rel):
                fi, vi = np.argwhere(out_op != out_rel)[0]
                report.mismatches.append(Violation(
                    f"{render(formulas[int(fi)])} differs at assignment {int(vi)}: "
                    f"operator {int(out_op[fi, vi])} vs relational {int(out_rel[fi, vi])}",
                    _frame_of(pre_mask, mod_mask, n)))
    return report


# ---------------------------------------------------------------------------
# Frame laws: lead collapses, meet topology, induction, regularity transfers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrameSuiteReport:
    max_worlds: int
    counts: dict
    witnesses: dict
    hed_loclin_violations: int
    hed_loclin_witness: int

    def count(self, name: str) -> int:
        return self.counts[name]

    def witness_frame(self, name: str) -> Optional[BirelFrame]:
        pair = self.witnesses.get(name)
        if pair is None:
            return None
        (pre_mask, mod_mask), n = pair
        return _frame_of(pre_mask, mod_mask, n)


def frame_law_suite(max_worlds: int = 4) -> FrameSuiteReport:
    """Run the kernel frame sweep over every labeled frame up to the bound."""
    totals = {name: 0 for name in kernels.SUITE_NAMES}
    witnesses: dict = {}
    hed_viol = 0
    hed_wit = -1
    for n in range(1, max_worlds + 1):
        pre = np.asarray(preorder_masks(n), np.int64)
        mod = np.asarray(transitive_masks(n), np.int64)
        counts, wit = kernels.frame_suite(pre, mod, n)
        for i, name in enumerate(kernels.SUITE_NAMES):
            totals[name] += int(counts[i])
            if int(wit[i, 0]) != -1 and name not in witnesses:
                witnesses[name] = ((int(wit[i, 0]), int(wit[i, 1])), n)
        viol, witness = kernels.hed_loclin_scan(pre, n)
        hed_viol += int(viol)
        if int(witness) != -1 and hed_wit == -1:
            hed_wit = int(witness)
    return FrameSuiteReport(max_worlds, totals, witnesses, hed_viol, hed_wit)


# ---------------------------------------------------------------------------
# Box-over-meet: derivative spaces induced from bitopological spaces
# ---------------------------------------------------------------------------

@dataclass
class BoxOverMeetReport:
    max_points: int
    spaces_checked: int = 0
    skipped_non_td: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def box_over_meet_sweep(max_points: int = 3) -> BoxOverMeetReport:
    """The box-over-meet formula is valid on every derivative space induced
    from a bitopological space (box topology = meet) whose diamond and meet
    topologies are T_d."""
    report = BoxOverMeetReport(max_points)
    for n in range(1, max_points + 1):
        for t_arrow in enumerate_topologies(n):
            for t_dia in enumerate_topologies(n):
                tri = bitop_to_tritop(t_arrow, t_dia)
                try:
                    space = induce(tri, "derivative")
                except TdViolation:
                    report.skipped_non_td += 1
                    continue
                report.spaces_checked += 1
                res = valid_on_space(space, BOX_OVER_MEET)
                if not res.valid:
                    report.violations.append(Violation(
                        f"refuted at world {res.world} with {res.valuation} on "
                        f"arrow={t_arrow!r}, dia={t_dia!r}"))
    return report


def box_over_meet_countermodel():
    """The three-point lead-topology countermodel to the box-over-meet
    formula: returns (model, extension mask, refuted world)."""
    from .semantics import extension

    frame = BirelFrame.from_edges(3, [(0, 1)], [(0, 2), (1, 2)])
    model = BirelModel(frame, {"p": 0b010, "q": 0b100})
    ext = extension(model, BOX_OVER_MEET)
    return model, ext, 0


# ---------------------------------------------------------------------------
# Loeb's axiom on finite T_d derivative spaces
# ---------------------------------------------------------------------------

@dataclass
class LoebReport:
    max_points: int
    spaces_checked: int = 0
    skipped: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def loeb_tritop_sweep(max_points: int = 3) -> LoebReport:
    """Loeb's axiom is valid on the derivative space of every T_d
    tritopological space satisfying the operator-space composition laws.

    The Cantor operators of a T_d topology satisfy their defining laws by
    construction, so only the two composition equalities are swept here; the
    unit tests cross-check a sample against the full law reports.
    """
    from .topo import cantor_ops

    report = LoebReport(max_points)
    for n in range(1, max_points + 1):
        full = (1 << n) - 1
        tops = enumerate_topologies(n)
        td = [t for t in tops if topo_properties(t).t_d]
        interiors = {t: cantor_ops(t).interior.table for t in tops}
        integrals = {t: cantor_ops(t).integral.table for t in td}
        derivs = {t: cantor_ops(t).derivative.table for t in td}
        code = compile_formula(LOEB, ("p",))
        for t_arrow in tops:
            it = interiors[t_arrow]
            opens = np.asarray(sorted(a for a in range(1 << n) if it[a] == a), np.int64)
            for t_dia in td:
                i_dia = interiors[t_dia]
                for t_box in td:
                    et = integrals[t_box]
                    ok = all(et[it[a]] == it[et[it[a]]] and et[it[a]] == i_dia[et[it[a]]]
                             for a in range(1 << n))
                    if not ok:
                        report.skipped += 1
                        continue
                    report.spaces_checked += 1
                    a, world = kernels.first_refuting_valuation(
                        code, opens, 1, np.asarray(it, np.int64),
                        np.asarray(derivs[t_dia], np.int64),
                        np.asarray(et, np.int64), full)
                    if int(a) >= 0:
                        report.violations.append(Violation(
                            f"refuted at world {int(world)} on arrow={t_arrow!r}, "
                            f"dia={t_dia!r}, box={t_box!r}"))
    return report


def loeb_scattered_sweep(max_points: int = 4) -> LoebReport:
    """Single-topology variant: every finite T_d topology, read as the
    derivative space over itself, validates Loeb; it is also scattered."""
    report = LoebReport(max_points)
    for n in range(1, max_points + 1):
        for t in enumerate_topologies(n):
            props = topo_properties(t)
            if not props.t_d:
                report.skipped += 1
                continue
            if not props.scattered:
                report.violations.append(Violation(f"T_d but not scattered: {t!r}"))
                continue
            space = induce(TriTopSpace(n, t, t, t), "derivative")
            report.spaces_checked += 1
            res = valid_on_space(space, LOEB)
            if not res.valid:
                report.violations.append(Violation(
                    f"refuted at world {res.world} with {res.valuation} on {t!r}"))
    return report


def loeb_refutation():
    """The one-world reflexive model refutes Loeb: returns (model, extension)."""
    from .semantics import relational_extension

    frame = BirelFrame.from_edges(1, [], [(0, 0)])
    model = BirelModel(frame, {"p": 0})
    return model, relational_extension(model, LOEB)


# ---------------------------------------------------------------------------
# CS4 fixture formulas
# ---------------------------------------------------------------------------

def formulas_valid_on_class(formulas: Sequence[Formula], logic: Logic,
                            max_worlds: int = 3) -> SoundnessReport:
    """Check that each formula is valid on every frame of the logic's class."""
    report = SoundnessReport(logic, max_worlds)
    compiled = [(render(f), f, propositions(f), compile_formula(f, propositions(f)))
                for f in formulas]
    for n in range(1, max_worlds + 1):
        full = (1 << n) - 1
        for pre_mask, mod_mask in enumerate_frame_masks(n, logic):
            report.frames += 1
            pre, mod, lead, (itab, dtab, etab) = _frame_tables(pre_mask, mod_mask, n)
            opens = np.asarray(upset_masks([int(r) for r in pre], n), np.int64)
            for name, inst, props, code in compiled:
                report.checks += 1
                a, world = kernels.first_refuting_valuation(
                    code, opens, len(props), itab, dtab, etab, full)
                if int(a) >= 0:
                    report.violations.append(Violation(
                        f"{name} refuted at world {int(world)}",
                        _frame_of(pre_mask, mod_mask, n)))
    return report


def cs4_fixture_sweep(max_worlds: int = 3) -> SoundnessReport:
    """The four CS4 fixture formulas are valid on every CS4 frame."""
    return formulas_valid_on_class(cs4_fixture_formulas, Logic.CS4, max_worlds)


# ---------------------------------------------------------------------------
# The backward-confluence gap model
# ---------------------------------------------------------------------------

def backward_gap_model() -> BirelModel:
    frame = BirelFrame.from_edges(3, [(1, 2)], [(0, 1)])
    return BirelModel(frame, {"p": 0b100, "q": 0})


def backward_gap_report():
    """Satisfaction pattern of the backward-gap model plus the two searches."""
    from .formula import parse
    from .search import find_countermodel
    from .semantics import extension

    model = backward_gap_model()
    fs = parse("(<>p -> []q) -> [](p -> q)")
    antecedent = extension(model, parse("<>p -> []q"))
    conseq = extension(model, parse("[](p -> q)"))
    found = find_countermodel(fs, Logic.K4I, 3)
    exhausted = find_countermodel(fs, Logic.IK4, 3)
    return model, antecedent, conseq, found, exhausted


# ---------------------------------------------------------------------------
# Irreflexivization by index stacking
# ---------------------------------------------------------------------------

@dataclass
class IrreflexivizationReport:
    max_worlds: int
    k: int
    frames: int = 0
    structure_violations: list[Violation] = field(default_factory=list)
    confluence_violations: list[Violation] = field(default_factory=list)
    equivalence_checks: int = 0
    equivalence_failure_count: int = 0
    equivalence_violations: list[Violation] = field(default_factory=list)

    @property
    def structure_ok(self) -> bool:
        return not self.structure_violations

    @property
    def confluence_ok(self) -> bool:
        return not self.confluence_violations

    @property
    def equivalence_ok(self) -> bool:
        return self.equivalence_failure_count == 0


def irreflexivization_sweep(max_worlds: int = 3, k: int = 4, depth: int = 2,
                            max_violations: int = 5) -> IrreflexivizationReport:
    """Structural, confluence-preservation, and depth-bounded equivalence
    checks of the index-stacking construction over all small frames.

    Confluence preservation is checked with the universal quantifiers
    restricted to interior indices (both index directions have headroom
    there); on the full truncated frame the top and bottom copies lack the
    index room the stacking argument consumes.
    """
    from .search import bank_extensions, compiled_canonical_bank

    report = IrreflexivizationReport(max_worlds, k)
    formulas, bank = compiled_canonical_bank(("p",), depth)
    for n in range(1, max_worlds + 1):
        interior = stack_interior_universe(n, k)
        for pre_mask, mod_mask in enumerate_frame_masks(n, None):
            report.frames += 1
            frame = _frame_of(pre_mask, mod_mask, n)
            base_props = frame_properties(frame)
            opens = upset_masks(frame.pre.rows, n)
            stacked_frame = irreflexivize(BirelModel(frame, {"p": 0}), k).frame
            sprops = frame_properties(stacked_frame)
            if not sprops.mod_irreflexive:
                report.structure_violations.append(Violation("mod not irreflexive", frame))
            if not stacked_frame.mod.is_transitive():
                report.structure_violations.append(Violation("mod not transitive", frame))
            bounded = frame_properties(stacked_frame, universe=interior)
            for name in ("forward_confluent", "backward_confluent", "downward_confluent"):
                if getattr(base_props, name) != getattr(bounded, name):
                    report.confluence_violations.append(Violation(
                        f"{name}: base {getattr(base_props, name)}, "
                        f"stacked-interior {getattr(bounded, name)}", frame))
            for val in opens:
                m1 = BirelModel(frame, {"p": val})
                m2 = irreflexivize(m1, k)
                base_bits = bank_extensions(m1, ("p",), bank)
                stacked_bits = bank_extensions(m2, ("p",), bank)
                for w in range(n):
                    report.equivalence_checks += 1
                    diff = ((base_bits >> w) & 1) != ((stacked_bits >> (w * k)) & 1)
                    hits = np.nonzero(diff)[0]
                    if len(hits):
                        report.equivalence_failure_count += 1
                        if len(report.equivalence_violations) < max_violations:
                            report.equivalence_violations.append(Violation(
                                f"world {w}, ||p||={val}: separated by "
                                f"{render(formulas[int(hits[0])])}", frame))
    return report
