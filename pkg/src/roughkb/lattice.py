"""Powerset lattice of fact combinations: construction and editing.

A knowledge base of order n materializes all 2**n fact subsets as
nodes, one level per subset size.  Node identity is an n-character
label of 0/1 digits, fact i owning the i-th bit from the right; level
follows from the popcount, and the Hasse neighbours follow from
single-bit edits of the label.

Structural edits (fact insertion/deletion, node modification) return
new lattices; nodes and decision entries are treated as immutable, so
unchanged parts are shared.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from . import errors
from ._num import ONE, ZERO, frac, publish2
from .propagation import DecisionEntry, PriorityConfig, node_decisions

DEFAULT_ORDER_CAP = 16

_UNSET = object()


@dataclasses.dataclass(frozen=True)
class Fact:
    """An atomic condition: one observed attribute/value pair."""

    id: int
    attribute: str
    value: str


class Head(NamedTuple):
    """Entry record of a lattice: level count and the entry label."""

    level_count: int
    entry: str


# --- label arithmetic -------------------------------------------------------

def label_for(fact_ids: Iterable[int], n: int) -> str:
    """Label with the bits of the given facts set (fact i = bit i from the right)."""
    present = set(fact_ids)
    return "".join("1" if fid in present else "0" for fid in range(n, 0, -1))


def facts_of(label: str) -> FrozenSet[int]:
    n = len(label)
    return frozenset(n - i for i, ch in enumerate(label) if ch == "1")


def level_of(label: str) -> int:
    return label.count("1")


@lru_cache(maxsize=None)
def _level_masks(n: int, level: int) -> Tuple[int, ...]:
    # combinations() emits position tuples in lexicographic order, which is
    # *not* numerically increasing as bit masks; sort to fix the enumeration.
    return tuple(sorted(sum(1 << p for p in combo)
                        for combo in combinations(range(n), level)))


def label_at(level: int, ordinal: int, n: int) -> str:
    """The ordinal-th label (1-based, ascending) among popcount-`level` labels."""
    if not 1 <= n:
        raise errors.OutOfRange("order must be at least 1, got %d" % n)
    if not 0 <= level <= n:
        raise errors.OutOfRange("level %d outside 0..%d" % (level, n))
    if not 1 <= ordinal <= comb(n, level):
        raise errors.OutOfRange("ordinal %d outside 1..C(%d,%d)"
                                % (ordinal, n, level))
    return format(_level_masks(n, level)[ordinal - 1], "0%db" % n)


def predecessor_labels(label: str) -> List[str]:
    """Labels one level down: clear each set bit, leftmost first."""
    return [label[:i] + "0" + label[i + 1:]
            for i, ch in enumerate(label) if ch == "1"]


def successor_labels(label: str, n: int) -> List[str]:
    """Labels one level up: set each clear bit, rightmost first."""
    if len(label) != n:
        raise errors.OutOfRange("label %r is not of order %d" % (label, n))
    return [label[:i] + "1" + label[i + 1:]
            for i in range(len(label) - 1, -1, -1) if label[i] == "0"]


# --- storage ----------------------------------------------------------------

class LatticeNode:
    """One fact subset with its per-disease decisions and neighbours."""

    __slots__ = ("label", "condition", "decisions", "predecessors", "successors")

    def __init__(self, label, condition, decisions, predecessors, successors):
        self.label = label
        self.condition = frozenset(condition)
        self.decisions = dict(decisions)
        self.predecessors = tuple(predecessors)
        self.successors = tuple(successors)

    @property
    def level(self) -> int:
        return level_of(self.label)

    def replace_decisions(self, decisions) -> "LatticeNode":
        return LatticeNode(self.label, self.condition, decisions,
                           self.predecessors, self.successors)

    def __eq__(self, other):
        return (isinstance(other, LatticeNode)
                and other.label == self.label
                and other.condition == self.condition
                and other.decisions == self.decisions
                and other.predecessors == self.predecessors
                and other.successors == self.successors)

    def __repr__(self):
        return ("LatticeNode(%r, %d decision%s)"
                % (self.label, len(self.decisions),
                   "" if len(self.decisions) == 1 else "s"))


class Lattice:
    """Order-n knowledge base: all 2**n nodes plus derivation settings.

    The settings (gate, priorities, rounding mode, declared diseases)
    travel with the lattice so that structural edits can re-derive
    affected decisions the same way the original propagation did.
    Equality is structural -- facts, nodes, settings -- and ignores the
    declared-disease registry, which is bookkeeping rather than content.
    """

    __slots__ = ("n", "facts", "levels", "nodes", "alpha", "priorities",
                 "round2", "declared")

    def __init__(self, facts, nodes, levels, alpha=ZERO, priorities=None,
                 round2=False, declared=frozenset()):
        self.facts = tuple(facts)
        self.n = len(self.facts)
        self.nodes = dict(nodes)
        self.levels = tuple(tuple(level) for level in levels)
        self.alpha = frac(alpha)
        self.priorities = priorities if priorities is not None else PriorityConfig()
        self.round2 = bool(round2)
        self.declared = frozenset(declared)

    @property
    def head(self) -> Head:
        return Head(self.n + 1, "0" * self.n)

    def node(self, label: str) -> LatticeNode:
        try:
            return self.nodes[label]
        except KeyError:
            raise errors.DanglingLabel("no node labelled %r" % (label,))

    def fact(self, fid: int) -> Fact:
        for fact in self.facts:
            if fact.id == fid:
                return fact
        raise errors.UnknownFact("no fact with id %d" % fid)

    def diseases(self) -> Tuple[str, ...]:
        seen = set(self.declared)
        for node in self.nodes.values():
            seen.update(node.decisions)
        return tuple(sorted(seen))

    def publish(self):
        return publish2 if self.round2 else (lambda x: x)

    def with_updates(self, updates: Mapping[str, Mapping[str, DecisionEntry]],
                     alpha=_UNSET, priorities=_UNSET, round2=_UNSET,
                     declare=()) -> "Lattice":
        """Copy with some nodes' decision maps replaced and settings adjusted."""
        nodes = {label: (node.replace_decisions(updates[label])
                         if label in updates else node)
                 for label, node in self.nodes.items()}
        return Lattice(
            self.facts, nodes, self.levels,
            alpha=self.alpha if alpha is _UNSET else alpha,
            priorities=self.priorities if priorities is _UNSET else priorities,
            round2=self.round2 if round2 is _UNSET else round2,
            declared=self.declared | frozenset(declare))

    def __eq__(self, other):
        return (isinstance(other, Lattice)
                and other.facts == self.facts
                and other.levels == self.levels
                and other.nodes == self.nodes
                and other.alpha == self.alpha
                and other.priorities == self.priorities
                and other.round2 == self.round2)

    def __repr__(self):
        return "Lattice(n=%d, %d nodes)" % (self.n, len(self.nodes))


def _build_structure(n: int) -> Tuple[Tuple[Tuple[str, ...], ...], Dict[str, LatticeNode]]:
    levels = tuple(tuple(label_at(level, k, n) for k in range(1, comb(n, level) + 1))
                   for level in range(n + 1))
    nodes = {}
    for level_labels in levels:
        for label in level_labels:
            nodes[label] = LatticeNode(label, facts_of(label), {},
                                       predecessor_labels(label),
                                       successor_labels(label, n))
    return levels, nodes


def _check_facts(facts: Sequence[Fact]):
    seen_ids = set()
    seen_pairs = set()
    for fact in facts:
        if fact.id in seen_ids:
            raise errors.DuplicateFact("fact id %d appears twice" % fact.id)
        if (fact.attribute, fact.value) in seen_pairs:
            raise errors.DuplicateFact("fact %r=%r appears twice"
                                       % (fact.attribute, fact.value))
        seen_ids.add(fact.id)
        seen_pairs.add((fact.attribute, fact.value))
    if seen_ids != set(range(1, len(facts) + 1)):
        raise errors.OutOfRange("fact ids must be 1..%d contiguously" % len(facts))


def _normalize_atomic(entry: DecisionEntry, fid: int) -> DecisionEntry:
    if not entry.weights:
        return entry.replace(weights={fid: ONE})
    if set(entry.weights) != {fid}:
        raise errors.OutOfRange(
            "atomic decision for fact %d carries weights for %s"
            % (fid, sorted(entry.weights)))
    return entry


def build_kb(facts: Sequence[Fact],
             atomic_decisions: Mapping[int, Sequence[DecisionEntry]],
             order_cap: int = DEFAULT_ORDER_CAP) -> Lattice:
    """Materialize the lattice skeleton with atomic decisions in place.

    Composite levels start empty; run propagation to fill them.

    Raises:
        OrderTooLarge: more facts than the materialization cap allows.
        DuplicateFact: repeated fact id or attribute/value pair.
        OutOfRange: non-contiguous fact ids, or a decision keyed to a
            missing fact.
    """
    facts = tuple(facts)
    if not facts:
        raise errors.OutOfRange("a knowledge base needs at least one fact")
    _check_facts(facts)
    n = len(facts)
    if n > order_cap:
        raise errors.OrderTooLarge(
            "order %d exceeds the cap of %d (2**%d nodes)" % (n, order_cap, n))

    levels, nodes = _build_structure(n)
    declared = set()
    for fid, entries in atomic_decisions.items():
        if not 1 <= int(fid) <= n:
            raise errors.UnknownFact("atomic decisions for unknown fact %r" % (fid,))
        label = label_for([int(fid)], n)
        decisions = {}
        for entry in entries:
            entry = _normalize_atomic(entry, int(fid))
            if entry.disease in decisions:
                raise errors.OutOfRange(
                    "fact %d carries two decisions for %r" % (fid, entry.disease))
            decisions[entry.disease] = entry
            declared.add(entry.disease)
        nodes[label] = nodes[label].replace_decisions(decisions)
    return Lattice(facts, nodes, levels, declared=declared)


def check_structure(kb: Lattice) -> List[str]:
    """Audit the structural invariants; returns problem descriptions."""
    problems = []
    n = kb.n
    if len(kb.nodes) != 2 ** n:
        problems.append("node count %d, expected %d" % (len(kb.nodes), 2 ** n))
    if len(kb.levels) != n + 1:
        problems.append("level count %d, expected %d" % (len(kb.levels), n + 1))
    for level, labels in enumerate(kb.levels):
        if len(labels) != comb(n, level):
            problems.append("level %d holds %d nodes, expected C(%d,%d)=%d"
                            % (level, len(labels), n, level, comb(n, level)))
        for label in labels:
            node = kb.nodes.get(label)
            if node is None:
                problems.append("level %d lists missing node %s" % (level, label))
                continue
            if level_of(label) != level:
                problems.append("node %s filed under level %d" % (label, level))
            if node.condition != facts_of(label):
                problems.append("node %s condition %s does not match its label"
                                % (label, sorted(node.condition)))
            if len(node.predecessors) != level or len(node.successors) != n - level:
                problems.append("node %s adjacency sizes (%d, %d), expected (%d, %d)"
                                % (label, len(node.predecessors),
                                   len(node.successors), level, n - level))
            for pred in node.predecessors:
                other = kb.nodes.get(pred)
                if other is None or label not in other.successors:
                    problems.append("edge %s -> %s not mirrored" % (pred, label))
    root = kb.nodes.get("0" * n)
    if root is not None and root.decisions:
        problems.append("entry node carries decisions")
    return problems


# --- structural edits -------------------------------------------------------

def _repropagate(kb_config, nodes: Dict[str, LatticeNode],
                 levels, targets: Iterable[str]) -> Dict[str, Dict[str, DecisionEntry]]:
    """Recompute the decision maps of the target labels, bottom up.

    Re-derivation runs from stored atomic evidence and priorities;
    evidence that was supplied directly for composite conditions during
    an earlier build is not retained and so does not reappear.
    """
    alpha, priorities, publish = kb_config
    targets = set(targets)
    fresh: Dict[str, Dict[str, DecisionEntry]] = {}
    order = [label for level_labels in levels for label in level_labels
             if label in targets]
    for label in order:
        node = nodes[label]
        preds = [(nodes[p].condition, fresh.get(p, nodes[p].decisions))
                 for p in node.predecessors]
        fresh[label] = node_decisions(node.condition, preds,
                                      priorities.weights_for, alpha,
                                      publish=publish)
    return fresh


def insert_fact(kb: Lattice, fact: Fact, atomic: Sequence[DecisionEntry],
                order_cap: int = DEFAULT_ORDER_CAP) -> Lattice:
    """Grow the lattice by one fact, which becomes the new highest bit.

    Existing labels gain a leading 0 and keep their conditions and
    decisions untouched; only the new nodes -- those containing the new
    fact -- have their decisions derived.
    """
    n2 = kb.n + 1
    if n2 > order_cap:
        raise errors.OrderTooLarge(
            "order %d exceeds the cap of %d" % (n2, order_cap))
    if fact.id != n2:
        raise errors.OutOfRange(
            "new fact must take id %d, got %d" % (n2, fact.id))
    _check_facts(kb.facts + (fact,))

    levels, nodes = _build_structure(n2)
    for label, node in kb.nodes.items():
        grown = "0" + label
        nodes[grown] = nodes[grown].replace_decisions(node.decisions)

    declared = set(kb.declared)
    new_atomic_label = "1" + "0" * kb.n
    decisions = {}
    for entry in atomic:
        entry = _normalize_atomic(entry, n2)
        if entry.disease in decisions:
            raise errors.OutOfRange(
                "fact %d carries two decisions for %r" % (n2, entry.disease))
        decisions[entry.disease] = entry
        declared.add(entry.disease)
    nodes[new_atomic_label] = nodes[new_atomic_label].replace_decisions(decisions)

    grown = Lattice(kb.facts + (fact,), nodes, levels, alpha=kb.alpha,
                    priorities=kb.priorities, round2=kb.round2,
                    declared=declared)
    new_composites = [label for label in nodes
                      if label[0] == "1" and level_of(label) >= 2]
    fresh = _repropagate((kb.alpha, kb.priorities, grown.publish()),
                         grown.nodes, grown.levels, new_composites)
    return grown.with_updates(fresh)


def delete_fact(kb: Lattice, fact_id: int) -> Lattice:
    """Shrink the lattice by one fact.

    Every node whose condition includes the fact disappears; surviving
    labels drop the fact's bit position, and higher fact ids (with their
    weight and priority references) shift down by one.  The survivors'
    decisions are already independent of the removed fact, so none are
    re-derived.
    """
    if not any(fact.id == fact_id for fact in kb.facts):
        raise errors.UnknownFact("no fact with id %d" % fact_id)
    n2 = kb.n - 1
    if n2 == 0:
        raise errors.OutOfRange("cannot delete the last fact")
    cut = kb.n - fact_id  # char position of the fact's bit

    def remap(fid: int) -> int:
        return fid - 1 if fid > fact_id else fid

    facts = tuple(dataclasses.replace(fact, id=remap(fact.id))
                  for fact in kb.facts if fact.id != fact_id)
    levels, nodes = _build_structure(n2)
    for label, node in kb.nodes.items():
        if label[cut] == "1":
            continue
        squeezed = label[:cut] + label[cut + 1:]
        decisions = {
            disease: entry.replace(weights={remap(f): w
                                            for f, w in entry.weights.items()})
            for disease, entry in node.decisions.items()}
        nodes[squeezed] = nodes[squeezed].replace_decisions(decisions)
    return Lattice(facts, nodes, levels, alpha=kb.alpha,
                   priorities=kb.priorities.without_fact(fact_id),
                   round2=kb.round2, declared=kb.declared)


# --- node modification ------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class ConditionEdit:
    """Rename the attribute and/or value text of an atomic condition."""

    attribute: Optional[str] = None
    value: Optional[str] = None


@dataclasses.dataclass(frozen=True)
class SetDecision:
    """Add or replace one disease decision at a node."""

    disease: str
    vd: int
    cf: object
    tv: Optional[tuple] = None
    weights: Optional[Mapping[int, Fraction]] = None


@dataclasses.dataclass(frozen=True)
class DropDecision:
    """Remove one disease decision from a node."""

    disease: str


def modify_node(kb: Lattice, label: str, change, observer=None) -> Lattice:
    """Edit one node and ripple the consequences.

    Condition edits are only legal at level 1 and need no ripple: nodes
    reference facts by id, so every composite condition reflects the
    new text immediately.  Decision edits re-derive every node whose
    condition strictly contains the edited one and report the per-node
    differences to the observer, if any, via ``decisions_added(disease,
    [(label, vd)])``, ``decisions_removed(disease, [(label, vd)])`` and
    ``truth_changed(disease, label, old_vd, new_vd)``.

    Raises:
        DanglingLabel: no such node.
        IllegalConditionEdit: condition edit anywhere but level 1.
        OutOfRange: decision edit on the entry node.
        NotPresent: dropping a decision the node does not carry.
    """
    node = kb.node(label)

    if isinstance(change, ConditionEdit):
        if node.level != 1:
            raise errors.IllegalConditionEdit(
                "condition edits target level-1 nodes, %r is at level %d"
                % (label, node.level))
        fid = next(iter(node.condition))
        old = kb.fact(fid)
        new = dataclasses.replace(
            old,
            attribute=old.attribute if change.attribute is None else change.attribute,
            value=old.value if change.value is None else change.value)
        facts = tuple(new if fact.id == fid else fact for fact in kb.facts)
        _check_facts(facts)
        return Lattice(facts, kb.nodes, kb.levels, alpha=kb.alpha,
                       priorities=kb.priorities, round2=kb.round2,
                       declared=kb.declared)

    if node.level == 0:
        raise errors.OutOfRange("the entry node carries no decisions")

    decisions = dict(node.decisions)
    if isinstance(change, SetDecision):
        weights = change.weights
        if weights is None:
            weights = kb.priorities.weights_for(node.condition, change.disease)
        decisions[change.disease] = DecisionEntry(
            change.disease, change.vd, change.cf, tv=change.tv, weights=weights)
        declared = kb.declared | {change.disease}
    elif isinstance(change, DropDecision):
        if change.disease not in decisions:
            raise errors.NotPresent(
                "node %s carries no decision for %r" % (label, change.disease))
        del decisions[change.disease]
        declared = kb.declared
    else:
        raise errors.OutOfRange("unsupported change %r" % (change,))

    updates = {label: decisions}
    cone = [lbl for lbl, other in kb.nodes.items()
            if other.condition > node.condition]
    nodes_view = kb.nodes.copy()
    nodes_view[label] = node.replace_decisions(decisions)
    fresh = _repropagate((kb.alpha, kb.priorities, kb.publish()),
                         nodes_view, kb.levels, cone)
    updates.update(fresh)

    if observer is not None:
        _report_diff(kb, updates, observer)
    return kb.with_updates(updates, declare=declared)


def _report_diff(kb: Lattice, updates, observer):
    added: Dict[str, list] = {}
    removed: Dict[str, list] = {}
    changed: Dict[str, list] = {}
    for label in sorted(updates, key=lambda l: (level_of(l), int(l, 2))):
        before = kb.nodes[label].decisions
        after = updates[label]
        for disease in sorted(set(before) | set(after)):
            if disease not in before:
                added.setdefault(disease, []).append((label, after[disease].vd))
            elif disease not in after:
                removed.setdefault(disease, []).append((label, before[disease].vd))
            elif before[disease].vd != after[disease].vd:
                changed.setdefault(disease, []).append(
                    (label, before[disease].vd, after[disease].vd))
    for disease in sorted(set(added) | set(removed) | set(changed)):
        if disease in added:
            observer.decisions_added(disease, added[disease])
        if disease in removed:
            observer.decisions_removed(disease, removed[disease])
        for label, old_vd, new_vd in changed.get(disease, ()):
            observer.truth_changed(disease, label, old_vd, new_vd)
