"""Rough approximation of disease concepts over the lattice.

Each node is its own elementary set (labels are distinct), so the
approximation regions reduce to membership tests on the ternary truth
value: surely-present rules form the lower region of the presence
concept, surely-absent rules the lower region of the absence concept,
and inconclusive rules the shared boundary.

All outputs are value-semantic: incremental maintenance returns new
``ApproximationSets``, leaving the input intact, so that any edit
sequence can be replayed and compared against a from-scratch rebuild.
"""

from __future__ import annotations

import dataclasses
from typing import FrozenSet, Iterable, Tuple

from . import errors
from .evidence import TruthValue


@dataclasses.dataclass(frozen=True)
class ConceptPair:
    """The two target concepts of one disease.

    ``concept1`` collects the nodes whose rules lean towards presence
    (vd 1 or 2); ``concept2`` those leaning towards absence (vd 0 or
    2).  Inconclusive nodes sit in both.
    """

    disease: str
    concept1: FrozenSet[str]
    concept2: FrozenSet[str]


@dataclasses.dataclass(frozen=True)
class ApproximationSets:
    """Lower/upper/boundary regions for both concepts of one disease."""

    lower1: FrozenSet[str]
    upper1: FrozenSet[str]
    boundary1: FrozenSet[str]
    lower2: FrozenSet[str]
    upper2: FrozenSet[str]
    boundary2: FrozenSet[str]

    @classmethod
    def from_vd_map(cls, vd_by_label) -> "ApproximationSets":
        """Build the six regions from a label -> vd mapping."""
        present = set()
        absent = set()
        open_ = set()
        for label, vd in vd_by_label.items():
            vd = TruthValue(vd)
            if vd == TruthValue.PRESENT:
                present.add(label)
            elif vd == TruthValue.ABSENT:
                absent.add(label)
            else:
                open_.add(label)
        return cls(lower1=frozenset(present),
                   upper1=frozenset(present | open_),
                   boundary1=frozenset(open_),
                   lower2=frozenset(absent),
                   upper2=frozenset(absent | open_),
                   boundary2=frozenset(open_))

    def vd_of(self, label: str) -> TruthValue:
        """The truth value implied by current membership.

        Raises:
            NotPresent: the label occupies none of the regions.
        """
        if label in self.lower1:
            return TruthValue.PRESENT
        if label in self.lower2:
            return TruthValue.ABSENT
        if label in self.boundary1:
            return TruthValue.INCONCLUSIVE
        raise errors.NotPresent("label %r is in no approximation region" % (label,))

    def _replace(self, **kw):
        return dataclasses.replace(self, **{k: frozenset(v) for k, v in kw.items()})


def _vd_map(kb, disease):
    if disease not in kb.diseases():
        raise errors.UnknownDisease("no disease %r in this knowledge base" % (disease,))
    return {label: node.decisions[disease].vd
            for label, node in kb.nodes.items() if disease in node.decisions}


def concepts(kb, disease: str) -> ConceptPair:
    """The presence/absence target concepts of a disease.

    Raises:
        UnknownDisease: the disease is neither declared nor present.
    """
    vd_by_label = _vd_map(kb, disease)
    c1 = frozenset(l for l, vd in vd_by_label.items()
                   if vd in (TruthValue.PRESENT, TruthValue.INCONCLUSIVE))
    c2 = frozenset(l for l, vd in vd_by_label.items()
                   if vd in (TruthValue.ABSENT, TruthValue.INCONCLUSIVE))
    return ConceptPair(disease, c1, c2)


def approximations(kb, disease: str) -> ApproximationSets:
    """Lower/upper/boundary regions of both concepts of a disease."""
    return ApproximationSets.from_vd_map(_vd_map(kb, disease))


def on_decisions_added(a: ApproximationSets,
                       added: Iterable[Tuple[str, int]]) -> ApproximationSets:
    """Route freshly decided nodes into the regions.

    Raises:
        AlreadyPresent: a label already occupies some region.
    """
    lower1, upper1, boundary1 = set(a.lower1), set(a.upper1), set(a.boundary1)
    lower2, upper2, boundary2 = set(a.lower2), set(a.upper2), set(a.boundary2)
    for label, vd in sorted(added):
        if label in upper1 or label in upper2:
            raise errors.AlreadyPresent("label %r already placed" % (label,))
        vd = TruthValue(vd)
        if vd == TruthValue.PRESENT:
            lower1.add(label)
            upper1.add(label)
        elif vd == TruthValue.ABSENT:
            lower2.add(label)
            upper2.add(label)
        else:
            upper1.add(label)
            boundary1.add(label)
            upper2.add(label)
            boundary2.add(label)
    return ApproximationSets(frozenset(lower1), frozenset(upper1),
                             frozenset(boundary1), frozenset(lower2),
                             frozenset(upper2), frozenset(boundary2))


def on_decisions_removed(a: ApproximationSets,
                         removed: Iterable[str]) -> ApproximationSets:
    """Withdraw nodes whose decisions were deleted.

    Raises:
        NotPresent: a label occupies no region.
    """
    lower1, upper1, boundary1 = set(a.lower1), set(a.upper1), set(a.boundary1)
    lower2, upper2, boundary2 = set(a.lower2), set(a.upper2), set(a.boundary2)
    for label in sorted(set(removed)):
        vd = a.vd_of(label)
        if vd == TruthValue.PRESENT:
            lower1.discard(label)
            upper1.discard(label)
        elif vd == TruthValue.ABSENT:
            lower2.discard(label)
            upper2.discard(label)
        else:
            upper1.discard(label)
            boundary1.discard(label)
            upper2.discard(label)
            boundary2.discard(label)
    return ApproximationSets(frozenset(lower1), frozenset(upper1),
                             frozenset(boundary1), frozenset(lower2),
                             frozenset(upper2), frozenset(boundary2))


def on_truth_changed(a: ApproximationSets, label: str,
                     old_vd, new_vd) -> ApproximationSets:
    """Move one node between regions after its truth value changed.

    Both concepts are maintained symmetrically on transitions through
    the inconclusive value, keeping the two boundaries identical.

    Raises:
        InvalidTransition: old and new truth values coincide.
        NotPresent: the label is absent, or filed under a different vd.
    """
    old_vd = TruthValue(old_vd)
    new_vd = TruthValue(new_vd)
    if old_vd == new_vd:
        raise errors.InvalidTransition("truth value unchanged (%d)" % old_vd)
    if a.vd_of(label) != old_vd:
        raise errors.NotPresent(
            "label %r is not filed under vd=%d" % (label, old_vd))
    step = on_decisions_removed(a, [label])
    return on_decisions_added(step, [(label, new_vd)])
