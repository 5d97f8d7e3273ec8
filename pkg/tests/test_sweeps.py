"""Small-scale runs of the verification sweeps, plus pinned minimal
counterexamples for the two collapse/induction statements the sweeps refute."""

import pytest

from imlab.hilbert import Logic
from imlab.opspace import frame_to_space
from imlab.relframe import BirelFrame, Relation, frame_properties
from imlab.sweeps import (
    frame_law_suite, box_over_meet_countermodel, box_over_meet_sweep, loeb_refutation,
    loeb_scattered_sweep, loeb_tritop_sweep, oracle_agreement_sweep,
    cs4_fixture_sweep, soundness_sweep,
)
from imlab.topo import TriTopSpace, cantor_ops, enumerate_topologies, frame_to_tritop, induce


@pytest.fixture(scope="module")
def suite3():
    return frame_law_suite(3)


def test_suite_counts_small(suite3):
    assert suite3.count("frames") == 2 + 4 * 13 + 29 * 171
    assert suite3.count("mod_reflexive") == 1 + 4 * 4 + 29 * 29


def test_true_laws_have_zero_violations(suite3):
    for name in ("backward_lead_collapse_violations", "downward_lead_inclusion_violations",
                 "downward_lead_reflexive_violations", "meet_topology_violations",
                 "closure_induction_violations",
                 "derivative_induction_corrected_violations",
                 "coarse_transfer_violations", "dregular_transfer_violations",
                 "bregular_transfer_violations", "space_law_violations"):
        assert suite3.count(name) == 0, name
    assert suite3.hed_loclin_violations == 0


def test_literal_statements_are_refuted(suite3):
    # the sweeps discover counterexamples to the two statements taken
    # literally; the minimal witnesses are pinned below
    assert suite3.count("downward_lead_collapse_violations") > 0
    assert suite3.count("derivative_induction_literal_violations") > 0


def test_downward_lead_collapse_fails_without_modal_reflexivity(f2_frame):
    # downward confluent, yet the lead relation is a proper subset of mod;pre:
    # 0 mod 1 pre 2 gives (0,2) on the right, but no modal step enters 2
    from imlab.relframe import compose
    props = frame_properties(f2_frame)
    assert props.downward_confluent
    mp = compose(f2_frame.mod, f2_frame.pre)
    assert f2_frame.lead.pairs == {(0, 1)}
    assert mp.pairs == {(0, 1), (0, 2)}
    assert f2_frame.lead.pairs < mp.pairs


def test_derivative_induction_fails_with_reflexive_lead_point():
    # irreflexive mod, but pre 0->1 and mod 1->0 compose to a lead loop at 0;
    # the Cantor integral of the lead topology cannot see that loop
    frame = BirelFrame(2, Relation(2, [(0, 0), (1, 1), (0, 1)]),
                       Relation(2, [(1, 0)]))
    assert frame.mod.is_irreflexive()
    assert (0, 0) in frame.lead.pairs
    direct = frame_to_space(frame)
    induced = induce(frame_to_tritop(frame), "derivative")
    assert direct.e_box(0) == 0
    assert induced.e_box(0) == 0b01
    assert direct.e_box != induced.e_box


def test_derivative_induction_sound_when_lead_is_irreflexive(l62_frame):
    induced = induce(frame_to_tritop(l62_frame), "derivative")
    direct = frame_to_space(l62_frame)
    assert (induced.i_arrow, induced.d_dia, induced.e_box) == (
        direct.i_arrow, direct.d_dia, direct.e_box)


def test_soundness_sweep_two_worlds():
    for logic in (Logic.CK4, Logic.GK4C, Logic.S4I):
        report = soundness_sweep(logic, 2)
        assert report.ok and report.frames > 0 and report.checks > 0


def test_oracle_sweep_two_worlds():
    report = oracle_agreement_sweep(2)
    assert report.ok
    assert report.formulas >= 300
    assert report.frames == 2 + 52


def test_box_over_meet_sweep_small():
    report = box_over_meet_sweep(2)
    assert report.ok and report.spaces_checked > 0


def test_box_over_meet_countermodel_values():
    model, ext, world = box_over_meet_countermodel()
    assert ext == 0b110
    assert not (ext >> world) & 1


def test_loeb_sweeps_small():
    report = loeb_tritop_sweep(2)
    assert report.ok and report.spaces_checked > 0
    scattered = loeb_scattered_sweep(3)
    assert scattered.ok and scattered.spaces_checked == 1 + 3 + 19


def test_loeb_tritop_filter_matches_full_law_reports():
    # the sweep's fast composition-equality filter must agree with the full
    # operator-space validation on the spaces it admits
    n = 2
    tops = enumerate_topologies(n)
    from imlab.topo import topo_properties
    td = [t for t in tops if topo_properties(t).t_d]
    for t_arrow in tops:
        for t_dia in td:
            for t_box in td:
                space = induce(TriTopSpace(n, t_arrow, t_dia, t_box), "derivative")
                it = space.i_arrow.table
                et = space.e_box.table
                i_dia = cantor_ops(t_dia).interior.table
                fast = all(et[it[a]] == it[et[it[a]]] and et[it[a]] == i_dia[et[it[a]]]
                           for a in range(1 << n))
                assert fast == (space.law_violations() == ())


def test_loeb_refutation_values():
    model, ext = loeb_refutation()
    assert ext == 0


def test_cs4_fixture_sweep_small():
    report = cs4_fixture_sweep(2)
    assert report.ok and report.frames == 1 + 16
