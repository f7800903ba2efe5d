"""Boolean minimization of approximation regions into decision rules.

Each lattice label in a region is a total minterm over the fact
literals (bit set = fact present, bit clear = fact absent).  A region
minimizes to an irredundant sum-of-products covering exactly its label
set -- no don't-cares -- via Quine-McCluskey prime implicants and an
exact Petrick-style cover for small orders, greedy cover selection
above that.
"""

from __future__ import annotations

import dataclasses
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from . import errors
from ._num import ZERO
from .evidence import TruthValue

EXACT_COVER_LIMIT = 12

# A product term maps fact ids to polarities; stored as a frozenset of
# (fact_id, positive) literals.  The empty term is the constant TRUE.
Term = FrozenSet[Tuple[int, bool]]


def _term_key(term: Term):
    return tuple(sorted(term))


def _literal_text(fid: int, positive: bool) -> str:
    return "f%d" % fid if positive else "NOT f%d" % fid


class SopExpression:
    """An irredundant sum of product terms over n fact literals."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Iterable[Term]):
        self.n = int(n)
        self.terms = frozenset(frozenset(t) for t in terms)

    def evaluate(self, label: str) -> bool:
        if len(label) != self.n:
            raise errors.OutOfRange("label %r is not of order %d" % (label, self.n))
        bits = int(label, 2)
        for term in self.terms:
            if all(bool(bits >> (fid - 1) & 1) == positive
                   for fid, positive in term):
                return True
        return False

    def truth_set(self) -> FrozenSet[str]:
        fmt = "0%db" % self.n
        return frozenset(format(v, fmt) for v in range(2 ** self.n)
                         if self.evaluate(format(v, fmt)))

    def ordered_terms(self) -> List[Term]:
        return sorted(self.terms, key=_term_key)

    def __str__(self):
        if not self.terms:
            return "FALSE"
        if frozenset() in self.terms:
            return "TRUE"
        parts = []
        for term in self.ordered_terms():
            lits = [_literal_text(f, p) for f, p in sorted(term)]
            text = " AND ".join(lits)
            parts.append("(%s)" % text if len(self.terms) > 1 and len(lits) > 1
                         else text)
        return " OR ".join(parts)

    def factored(self) -> str:
        """Single-level factoring of the literals shared by every term."""
        if not self.terms or frozenset() in self.terms:
            return str(self)
        ordered = self.ordered_terms()
        common = frozenset.intersection(*ordered)
        if len(ordered) == 1 or not common:
            return str(self)
        head = " AND ".join(_literal_text(f, p) for f, p in sorted(common))
        tails = []
        for term in ordered:
            rest = sorted(term - common)
            if not rest:
                return str(self)  # a term equals the common part; don't factor
            text = " AND ".join(_literal_text(f, p) for f, p in rest)
            tails.append("(%s)" % text if len(rest) > 1 else text)
        return "%s AND (%s)" % (head, " OR ".join(tails))

    def __eq__(self, other):
        return (isinstance(other, SopExpression)
                and other.n == self.n and other.terms == self.terms)

    def __hash__(self):
        return hash((self.n, self.terms))

    def __repr__(self):
        return "SopExpression(n=%d, %s)" % (self.n, str(self))


# --- Quine-McCluskey --------------------------------------------------------

def _prime_implicants(minterms: Sequence[int], n: int) -> List[Tuple[int, int]]:
    """All prime implicants as (bits, dash_mask) cubes."""
    current = {(m, 0) for m in minterms}
    primes: Set[Tuple[int, int]] = set()
    while current:
        merged = set()
        nxt = set()
        ordered = sorted(current)
        by_mask: Dict[int, List[int]] = {}
        for bits, mask in ordered:
            by_mask.setdefault(mask, []).append(bits)
        for mask, group in by_mask.items():
            group_set = set(group)
            for bits in group:
                for pos in range(n):
                    flip = 1 << pos
                    if mask & flip or not bits & flip:
                        continue
                    if bits ^ flip in group_set:
                        merged.add((bits, mask))
                        merged.add((bits ^ flip, mask))
                        nxt.add((bits & ~flip, mask | flip))
        primes.update(current - merged)
        current = nxt
    return sorted(primes)


def _covers(cube: Tuple[int, int], minterm: int) -> bool:
    bits, mask = cube
    return minterm & ~mask == bits


def _cube_term(cube: Tuple[int, int], n: int) -> Term:
    bits, mask = cube
    return frozenset((pos + 1, bool(bits >> pos & 1))
                     for pos in range(n) if not mask >> pos & 1)


def _cover_cost(cover: Iterable[Term]):
    terms = sorted(cover, key=_term_key)
    return (len(terms), sum(len(t) for t in terms),
            tuple(_term_key(t) for t in terms))


def _petrick(primes: Sequence[Tuple[int, int]],
             minterms: Sequence[int]) -> List[Set[int]]:
    """All irredundant prime index sets covering the minterms."""
    products: List[FrozenSet[int]] = [frozenset()]
    for m in minterms:
        choices = [i for i, p in enumerate(primes) if _covers(p, m)]
        grown = set()
        for partial in products:
            for i in choices:
                grown.add(partial | {i})
        # absorption: drop any selection containing another
        pruned = []
        for cand in sorted(grown, key=len):
            if not any(keep <= cand for keep in pruned):
                pruned.append(cand)
        products = pruned
    return [set(p) for p in products]


def _exact_cover(primes, minterms, n) -> List[Term]:
    essential_idx = set()
    remaining = []
    for m in minterms:
        owners = [i for i, p in enumerate(primes) if _covers(p, m)]
        if len(owners) == 1:
            essential_idx.add(owners[0])
    for m in minterms:
        if not any(_covers(primes[i], m) for i in essential_idx):
            remaining.append(m)
    best = None
    if remaining:
        for selection in _petrick(primes, remaining):
            cover = [_cube_term(primes[i], n)
                     for i in sorted(essential_idx | selection)]
            cost = _cover_cost(cover)
            if best is None or cost < best:
                best = cost
    else:
        best = _cover_cost(_cube_term(primes[i], n) for i in essential_idx)
    return [frozenset(t) for t in best[2]]


def _greedy_cover(primes, minterms, n) -> List[Term]:
    uncovered = set(minterms)
    chosen = []
    while uncovered:
        def gain(item):
            i, p = item
            hits = sum(1 for m in uncovered if _covers(p, m))
            return (-hits, len(_cube_term(p, n)), p)
        i, p = min(enumerate(primes), key=gain)
        hits = {m for m in uncovered if _covers(p, m)}
        if not hits:
            raise AssertionError("prime cover exhausted with minterms left")
        chosen.append(_cube_term(p, n))
        uncovered -= hits
    # reverse-delete any pick made redundant by later ones
    fmt = "0%db" % n
    kept = list(chosen)
    for term in chosen:
        trial = [t for t in kept if t != term]
        if trial and all(SopExpression(n, trial).evaluate(format(m, fmt))
                         for m in minterms):
            kept = trial
    return kept


def minimize(minterms: Iterable[str], n: int) -> SopExpression:
    """Minimal sum of products whose truth set is exactly the label set.

    Raises:
        EmptyMintermSet: nothing to cover.
        OutOfRange: a label of the wrong length or alphabet.
    """
    labels = sorted(set(minterms))
    if not labels:
        raise errors.EmptyMintermSet("no minterms to minimize")
    values = []
    for label in labels:
        if len(label) != n or set(label) - {"0", "1"}:
            raise errors.OutOfRange("bad minterm label %r for order %d" % (label, n))
        values.append(int(label, 2))
    primes = _prime_implicants(values, n)
    if n <= EXACT_COVER_LIMIT:
        terms = _exact_cover(primes, values, n)
    else:
        terms = _greedy_cover(primes, values, n)
    return SopExpression(n, terms)


# --- rule emission ----------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class MinimizedRule:
    """One minimized decision rule with its quality measures."""

    condition: SopExpression
    disease: str
    vd: TruthValue
    kind: str
    source_labels: FrozenSet[str]
    metrics: Optional[object] = None


_REGIONS = {
    "certain": (("lower1", TruthValue.PRESENT), ("lower2", TruthValue.ABSENT)),
    "uncertain": (("boundary1", TruthValue.INCONCLUSIVE),),
    "possible": (("upper1", TruthValue.PRESENT), ("upper2", TruthValue.ABSENT)),
}


def generate_rules(kb, approx: Mapping[str, "ApproximationSets"],
                   kinds: Sequence[str] = ("certain",)) -> List[MinimizedRule]:
    """Minimize the selected regions of every disease into rules.

    One rule is emitted per nonempty (disease, region) pair; a region's
    labels minimize together, so conditions that admit a shared cover
    come out already merged.  Output is ordered by disease and then by
    descending reliability strength.

    A possible-rule region whose definite class is empty (everything in
    it is inconclusive) has no denominator to measure against; such a
    rule is emitted with ``metrics`` left as None and sorts after its
    measured siblings.
    """
    from . import metrics as _metrics  # deferred: metrics reads rule shapes

    for kind in kinds:
        if kind not in _REGIONS:
            raise errors.OutOfRange("unknown rule kind %r" % (kind,))
    rules = []
    for disease in sorted(approx):
        sets = approx[disease]
        for kind in kinds:
            for region, vd in _REGIONS[kind]:
                labels = frozenset(getattr(sets, region))
                if not labels:
                    continue
                rule = MinimizedRule(minimize(labels, kb.n), disease, vd,
                                     kind, labels)
                try:
                    rule = dataclasses.replace(
                        rule, metrics=_metrics.measure(rule, kb))
                except errors.ZeroMass:
                    pass
                rules.append(rule)
    rules.sort(key=lambda r: (
        r.disease,
        -(r.metrics.strength if r.metrics is not None else ZERO),
        int(r.vd)))
    return rules


if __name__ == "__main__":
    # two worked four-variable covers, one factorable
    for shown in ({"1000", "1001", "1101", "1100"},
                  {"1100", "1101", "1001", "1111", "1011", "1010", "1110"}):
        expr = minimize(shown, 4)
        print(sorted(shown), "->", expr, "| factored:", expr.factored())
