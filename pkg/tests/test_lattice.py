"""Lattice structure, label arithmetic, construction, and edits."""

from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import kb_from_atomics, random_kb, seeded
from roughkb import errors
from roughkb.lattice import (ConditionEdit, DropDecision, Fact, SetDecision,
                             build_kb, check_structure, delete_fact, facts_of,
                             insert_fact, label_at, label_for, level_of,
                             modify_node, predecessor_labels, successor_labels)
from roughkb.propagation import DecisionEntry, propagate

F = Fraction


def _facts(n):
    return [Fact(i, "a%d" % i, "yes") for i in range(1, n + 1)]


def _tiny_kb(n=3):
    return build_kb(_facts(n), {1: [DecisionEntry("ANK", 1, F(1, 2))]})


# --- label arithmetic -------------------------------------------------------

def test_label_layout_prints_highest_fact_first():
    assert label_for([1], 3) == "001"
    assert label_for([2], 3) == "010"
    assert label_for([1, 3], 3) == "101"
    assert facts_of("101") == frozenset({1, 3})
    assert level_of("101") == 2
    assert level_of("000") == 0


def test_label_at_is_one_based_and_numerically_ascending():
    assert [label_at(2, k, 3) for k in (1, 2, 3)] == ["011", "101", "110"]
    assert [label_at(1, k, 4) for k in (1, 2, 3, 4)] == [
        "0001", "0010", "0100", "1000"]
    assert label_at(0, 1, 3) == "000"
    with pytest.raises(errors.OutOfRange):
        label_at(2, 0, 3)
    with pytest.raises(errors.OutOfRange):
        label_at(2, 4, 3)
    with pytest.raises(errors.OutOfRange):
        label_at(4, 1, 3)


def test_neighbors_enumerate_in_document_order():
    assert predecessor_labels("111") == ["011", "101", "110"]
    assert predecessor_labels("101") == ["001", "100"]
    assert successor_labels("001", 3) == ["011", "101"]
    assert successor_labels("010", 3) == ["011", "110"]
    assert successor_labels("111", 3) == []
    with pytest.raises(errors.OutOfRange):
        successor_labels("01", 3)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=8).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.integers(1, n)))))
def test_label_roundtrip(case):
    n, fids = case
    label = label_for(fids, n)
    assert len(label) == n
    assert facts_of(label) == frozenset(fids)
    assert level_of(label) == len(fids)


# --- structural properties --------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_structure_invariants(n):
    kb = _tiny_kb(n) if n >= 1 else None
    assert len(kb.nodes) == 2 ** n
    assert kb.head.level_count == n + 1
    assert kb.head.entry == "0" * n
    seen = set()
    for level, labels in enumerate(kb.levels):
        assert len(labels) == comb(n, level)
        for label in labels:
            assert label not in seen
            seen.add(label)
            assert level_of(label) == level
            node = kb.node(label)
            assert len(node.predecessors) == level
            assert len(node.successors) == n - level
            for p in node.predecessors:
                assert facts_of(p) < facts_of(label)
                assert level_of(p) == level - 1
            for s in node.successors:
                assert facts_of(label) < facts_of(s)
                assert level_of(s) == level + 1
    assert check_structure(kb) == []


def test_check_structure_reports_damage():
    kb = _tiny_kb(2)
    kb.nodes.pop("11")
    problems = check_structure(kb)
    assert problems  # at minimum the node count is off
    assert any("node count" in p for p in problems)


# --- construction -----------------------------------------------------------

def test_build_rejects_bad_fact_lists():
    with pytest.raises(errors.OutOfRange):
        build_kb([], {})
    with pytest.raises(errors.DuplicateFact):
        build_kb([Fact(1, "a", "yes"), Fact(1, "b", "yes")], {})
    with pytest.raises(errors.DuplicateFact):
        build_kb([Fact(1, "a", "yes"), Fact(2, "a", "yes")], {})
    with pytest.raises(errors.OutOfRange):
        build_kb([Fact(1, "a", "yes"), Fact(3, "b", "yes")], {})
    with pytest.raises(errors.OrderTooLarge):
        build_kb(_facts(5), {}, order_cap=4)


def test_build_rejects_bad_atomic_decisions():
    with pytest.raises(errors.UnknownFact):
        build_kb(_facts(2), {3: [DecisionEntry("ANK", 1, F(1, 2))]})
    with pytest.raises(errors.OutOfRange):
        build_kb(_facts(2), {1: [DecisionEntry("ANK", 1, F(1, 2)),
                                 DecisionEntry("ANK", 0, F(1, 4))]})


def test_build_places_atomics_and_leaves_composites_empty():
    kb = build_kb(_facts(2), {1: [DecisionEntry("ANK", 1, F(1, 2))],
                              2: [DecisionEntry("BUR", 0, F(3, 4))]})
    assert set(kb.node("01").decisions) == {"ANK"}
    assert set(kb.node("10").decisions) == {"BUR"}
    assert kb.node("11").decisions == {}
    assert kb.node("00").decisions == {}
    assert kb.diseases() == ("ANK", "BUR")
    entry = kb.node("01").decisions["ANK"]
    assert entry.weights == {1: F(1)}


def test_node_and_fact_lookup_errors():
    kb = _tiny_kb(2)
    with pytest.raises(errors.DanglingLabel):
        kb.node("111")
    with pytest.raises(errors.UnknownFact):
        kb.fact(9)
    assert kb.fact(2).attribute == "a2"


# --- fact insertion and deletion --------------------------------------------

def test_insert_fact_prefixes_existing_labels():
    rng = seeded(101)
    kb, _, _ = random_kb(rng, 2)
    bigger = insert_fact(kb, Fact(3, "a3", "yes"),
                         [DecisionEntry("ANK", 2, F(1, 3))])
    assert bigger.n == 3
    for label in kb.nodes:
        old = kb.node(label).decisions
        new = bigger.node("0" + label).decisions
        assert set(old) == set(new)
        for d in old:
            assert (old[d].vd, old[d].cf) == (new[d].vd, new[d].cf)
    assert bigger.node("100").decisions["ANK"].cf == F(1, 3)
    assert check_structure(bigger) == []


def test_insert_fact_requires_the_next_id():
    kb = _tiny_kb(2)
    with pytest.raises(errors.OutOfRange):
        insert_fact(kb, Fact(5, "a5", "yes"), [])
    with pytest.raises(errors.DuplicateFact):
        insert_fact(kb, Fact(3, "a1", "yes"), [])


@pytest.mark.parametrize("seed", [7, 19, 23])
def test_insert_then_delete_restores_the_lattice(seed):
    rng = seeded(seed)
    kb, _, _ = random_kb(rng, 3, round2=True)
    grown = insert_fact(kb, Fact(4, "a4", "yes"),
                        [DecisionEntry("COX", 1, F(2, 5))])
    back = delete_fact(grown, 4)
    assert back == kb


@pytest.mark.parametrize("seed,drop", [(3, 1), (3, 2), (11, 3), (29, 2)])
def test_delete_fact_equals_rebuild_on_reduced_input(seed, drop):
    rng = seeded(seed)
    kb, atomics, priorities = random_kb(rng, 3, round2=True)
    shrunk = delete_fact(kb, drop)

    shift = lambda f: f - 1 if f > drop else f  # noqa: E731
    survivors = [Fact(shift(f.id), f.attribute, f.value)
                 for f in kb.facts if f.id != drop]
    reduced = {shift(fid): [DecisionEntry(d, vd, cf)
                            for d, (vd, cf) in sorted(per.items())]
               for fid, per in atomics.items() if fid != drop}
    if not reduced:
        pytest.skip("degenerate draw: every decision sat on the dropped fact")
    rebuilt = propagate(build_kb(survivors, reduced),
                        priorities=priorities.without_fact(drop), round2=True)
    assert shrunk.facts == rebuilt.facts
    assert shrunk.levels == rebuilt.levels
    for label in rebuilt.nodes:
        a, b = shrunk.node(label).decisions, rebuilt.node(label).decisions
        assert set(a) == set(b)
        for d in a:
            assert (a[d].vd, a[d].cf) == (b[d].vd, b[d].cf), (label, d)


def test_delete_refuses_the_last_fact():
    kb = _tiny_kb(1)
    with pytest.raises(errors.OutOfRange):
        delete_fact(kb, 1)
    with pytest.raises(errors.UnknownFact):
        delete_fact(_tiny_kb(2), 5)


# --- targeted edits ---------------------------------------------------------

class _Recorder:
    def __init__(self):
        self.events = []

    def decisions_added(self, disease, pairs):
        self.events.append(("added", disease, list(pairs)))

    def decisions_removed(self, disease, pairs):
        self.events.append(("removed", disease, list(pairs)))

    def truth_changed(self, disease, label, old_vd, new_vd):
        self.events.append(("changed", disease, label, int(old_vd), int(new_vd)))


def _two_fact_kb():
    kb = build_kb(_facts(2), {1: [DecisionEntry("ANK", 1, F(1, 2))],
                              2: [DecisionEntry("ANK", 1, F(1, 4))]})
    return propagate(kb)


def test_set_decision_ripples_upward():
    kb = _two_fact_kb()
    assert kb.node("11").decisions["ANK"].vd == 1
    rec = _Recorder()
    out = modify_node(kb, "01", SetDecision("ANK", 0, F(1, 2)), observer=rec)
    assert out.node("01").decisions["ANK"].vd == 0
    # the flipped side carries the higher credibility, so it prevails
    assert out.node("11").decisions["ANK"].vd == 0
    assert out.node("11").decisions["ANK"].cf == F(1, 8)
    assert rec.events == [("changed", "ANK", "01", 1, 0),
                          ("changed", "ANK", "11", 1, 0)]


def test_set_decision_tie_turns_inconclusive():
    kb = _two_fact_kb()
    rec = _Recorder()
    # equal credibility on opposite verdicts: the pair cannot settle
    out = modify_node(kb, "01", SetDecision("ANK", 0, F(1, 4)), observer=rec)
    assert out.node("11").decisions["ANK"].vd == 2
    assert ("changed", "ANK", "11", 1, 2) in rec.events


def test_set_decision_with_same_vd_is_silent():
    kb = _two_fact_kb()
    rec = _Recorder()
    out = modify_node(kb, "01", SetDecision("ANK", 1, F(9, 10)), observer=rec)
    assert rec.events == []
    assert out.node("01").decisions["ANK"].cf == F(9, 10)
    assert out.node("11").decisions["ANK"].cf != kb.node("11").decisions["ANK"].cf


def test_drop_decision_reports_removals():
    kb = _two_fact_kb()
    rec = _Recorder()
    out = modify_node(kb, "01", DropDecision("ANK"), observer=rec)
    assert "ANK" not in out.node("01").decisions
    # the composite survives on the carryover from fact 2 alone
    assert out.node("11").decisions["ANK"].vd == 1
    assert rec.events == [("removed", "ANK", [("01", 1)])]
    with pytest.raises(errors.NotPresent):
        modify_node(out, "01", DropDecision("ANK"))


def test_new_atomic_decision_reports_additions():
    kb = _two_fact_kb()
    rec = _Recorder()
    out = modify_node(kb, "01", SetDecision("BUR", 2, F(1, 5)), observer=rec)
    assert out.node("01").decisions["BUR"].vd == 2
    assert ("added", "BUR", [("01", 2), ("11", 2)]) in rec.events
    assert out.declared >= {"ANK", "BUR"}


def test_condition_edit_renames_in_place():
    kb = _two_fact_kb()
    out = modify_node(kb, "01", ConditionEdit(attribute="fever", value="no"))
    assert out.fact(1).attribute == "fever"
    assert out.fact(1).value == "no"
    assert out.node("11").decisions == kb.node("11").decisions
    with pytest.raises(errors.IllegalConditionEdit):
        modify_node(kb, "11", ConditionEdit(attribute="x"))


def test_root_rejects_decision_edits():
    kb = _two_fact_kb()
    with pytest.raises(errors.OutOfRange):
        modify_node(kb, "00", SetDecision("ANK", 1, F(1, 2)))
    with pytest.raises(errors.DanglingLabel):
        modify_node(kb, "0110", SetDecision("ANK", 1, F(1, 2)))
