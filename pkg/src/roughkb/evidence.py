"""Graded evidence sources and atomic decision resolution.

Knowledge sources are graded into ``q`` acceptability levels (level 1
the most authoritative).  For one symptom/disease assertion the sources
split three ways: kind 1 asserts presence, kind 2 asserts absence, kind
3 is inconclusive.  This module turns the per-kind, per-level source
counts into a normalized truth triple, builds the boolean presence
matrix over kinds and levels, and resolves the pair into a ternary
truth value with a credibility factor.
"""

from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Mapping, Tuple

from . import errors


class TruthValue(IntEnum):
    """Ternary outcome: 1 surely present, 0 surely absent, 2 open."""

    ABSENT = 0
    PRESENT = 1
    INCONCLUSIVE = 2


class SourceGrading:
    """Count of acceptability levels and their weights.

    Level ``j`` carries weight ``q - j + 1``, so the best level weighs
    ``q`` and the worst weighs 1.
    """

    __slots__ = ("q",)

    def __init__(self, q: int):
        if not isinstance(q, int) or q < 1:
            raise errors.OutOfRange("grading needs at least one level, got %r" % (q,))
        self.q = q

    def weight(self, level: int) -> int:
        if not 1 <= level <= self.q:
            raise errors.OutOfRange("level %r outside 1..%d" % (level, self.q))
        return self.q - level + 1

    def __eq__(self, other):
        return isinstance(other, SourceGrading) and other.q == self.q

    def __hash__(self):
        return hash(("SourceGrading", self.q))

    def __repr__(self):
        return "SourceGrading(q=%d)" % self.q


class EvidenceProfile:
    """Source counts indexed by assertion kind (1..3) and level (1..q)."""

    __slots__ = ("counts",)

    def __init__(self, counts: Iterable[Iterable[int]]):
        rows = tuple(tuple(row) for row in counts)
        if len(rows) != 3:
            raise errors.OutOfRange("profile needs exactly 3 kind rows")
        if not rows[0] or len({len(r) for r in rows}) != 1:
            raise errors.OutOfRange("profile rows must share a positive length")
        for row in rows:
            for c in row:
                if not isinstance(c, int) or c < 0:
                    raise errors.OutOfRange("counts must be nonnegative integers")
        self.counts = rows

    @classmethod
    def from_levels(cls, by_kind: Mapping[int, Mapping[int, int]], q: int) -> "EvidenceProfile":
        """Build a profile from sparse ``{kind: {level: count}}`` data."""
        rows = []
        for kind in (1, 2, 3):
            sparse = dict(by_kind.get(kind, {}))
            for level in sparse:
                if not 1 <= level <= q:
                    raise errors.OutOfRange("level %r outside 1..%d" % (level, q))
            rows.append(tuple(sparse.get(level, 0) for level in range(1, q + 1)))
        return cls(rows)

    @property
    def q(self) -> int:
        return len(self.counts[0])

    def kind_mass(self, kind: int, grading: SourceGrading) -> int:
        """Weighted source mass for one assertion kind."""
        row = self.counts[kind - 1]
        return sum(grading.weight(j + 1) * c for j, c in enumerate(row))

    def __eq__(self, other):
        return isinstance(other, EvidenceProfile) and other.counts == self.counts

    def __hash__(self):
        return hash(self.counts)

    def __repr__(self):
        return "EvidenceProfile(%r)" % (self.counts,)


class TruthTriple(Tuple[Fraction, Fraction, Fraction]):
    """Normalized weighted evidence mass for presence/absence/openness."""

    __slots__ = ()

    def __new__(cls, tv1, tv2, tv3):
        return super().__new__(cls, (Fraction(tv1), Fraction(tv2), Fraction(tv3)))

    @property
    def tv1(self) -> Fraction:
        return self[0]

    @property
    def tv2(self) -> Fraction:
        return self[1]

    @property
    def tv3(self) -> Fraction:
        return self[2]

    def __repr__(self):
        return "TruthTriple(%s, %s, %s)" % self


class PresenceMatrix:
    """3 x q boolean indicator of which (kind, level) cells hold sources."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[bool]]):
        self.rows = tuple(tuple(bool(v) for v in row) for row in rows)
        if len(self.rows) != 3 or len({len(r) for r in self.rows}) != 1:
            raise errors.OutOfRange("presence matrix must be 3 x q")

    @property
    def q(self) -> int:
        return len(self.rows[0])

    def __eq__(self, other):
        return isinstance(other, PresenceMatrix) and other.rows == self.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "PresenceMatrix(%r)" % (self.rows,)


def truth_triple(profile: EvidenceProfile, grading: SourceGrading) -> TruthTriple:
    """Normalize the weighted per-kind masses into a triple summing to 1.

    Raises:
        ZeroEvidence: the profile holds no sources at all; the assertion
            should simply be absent, never defaulted.
    """
    if profile.q != grading.q:
        raise errors.OutOfRange("profile has %d levels, grading %d"
                                % (profile.q, grading.q))
    masses = [profile.kind_mass(kind, grading) for kind in (1, 2, 3)]
    total = sum(masses)
    if total == 0:
        raise errors.ZeroEvidence("profile carries no weighted evidence")
    return TruthTriple(*(Fraction(m, total) for m in masses))


def presence_matrix(profile: EvidenceProfile) -> PresenceMatrix:
    return PresenceMatrix(tuple(tuple(c > 0 for c in row) for row in profile.counts))


def conditional_weight(priority: int, n: int) -> Fraction:
    """Weight contributed by one fact: its priority over the total.

    Raises:
        OutOfRange: unless ``1 <= priority <= n``.
    """
    if not (isinstance(priority, int) and isinstance(n, int)):
        raise errors.OutOfRange("priorities are integers")
    if not 1 <= priority <= n:
        raise errors.OutOfRange("priority %r outside 1..%d" % (priority, n))
    return Fraction(priority, n)


# --- decision resolution ----------------------------------------------------
#
# Row r of the presence matrix (0-based) wins with outcome _ROW_VD[r] and
# credibility equal to its own triple component.

_ROW_VD = (TruthValue.PRESENT, TruthValue.ABSENT, TruthValue.INCONCLUSIVE)

# Terminal defaults when a tie survives every scan: the row pair that
# tied determines which component backs the inconclusive outcome.
_PAIR_DEFAULT_COMPONENT = {(0, 1): 0, (0, 2): 2, (1, 2): 2}


def _won(row: int, t: TruthTriple):
    return _ROW_VD[row], t[row]


def _scan_pair(rows, pair, start, t):
    """Walk later columns for the first one hitting exactly one pair row."""
    a, b = pair
    q = len(rows[0])
    for col in range(start, q):
        if rows[a][col] != rows[b][col]:
            return _won(a if rows[a][col] else b, t)
    return TruthValue.INCONCLUSIVE, t[_PAIR_DEFAULT_COMPONENT[pair]]


def _resolve_pair(rows, pair, y, t):
    a, b = pair
    if t[a] > t[b]:
        return _won(a, t)
    if t[a] < t[b]:
        return _won(b, t)
    return _scan_pair(rows, pair, y + 1, t)


def _resolve_three(rows, y, t):
    q = len(rows[0])
    ties = [(a, b) for a, b in _PAIR_DEFAULT_COMPONENT if t[a] == t[b]]
    if not ties:
        return _won(max(range(3), key=t.__getitem__), t)
    if len(ties) == 1:
        # one tied pair: the outcome is inconclusive either way, backed
        # by the strict winner's component when the pair lost
        pair = ties[0]
        third = ({0, 1, 2} - set(pair)).pop()
        component = third if t[third] > t[pair[0]] else _PAIR_DEFAULT_COMPONENT[pair]
        return TruthValue.INCONCLUSIVE, t[component]
    # all three equal: search later columns for a discriminating cell
    for col in range(y + 1, q):
        hit = [r for r in range(3) if rows[r][col]]
        if not hit:
            continue
        if len(hit) == 1:
            return _won(hit[0], t)
        pair = (0, 1) if (0 in hit and 1 in hit) else (0, 2) if 0 in hit else (1, 2)
        a, b = pair
        for col2 in range(col + 1, q):
            if rows[a][col2] or rows[b][col2]:
                return _won(a if rows[a][col2] else b, t)
        return TruthValue.INCONCLUSIVE, t[_PAIR_DEFAULT_COMPONENT[pair]]
    return TruthValue.INCONCLUSIVE, t[2]


def resolve_decision(m: PresenceMatrix, t: TruthTriple):
    """Resolve a presence matrix and its triple to ``(vd, credibility)``.

    The winning assertion kind always donates its own triple component
    as the credibility factor; ties walk the remaining columns looking
    for a lower-priority discriminator and otherwise fall to an
    inconclusive default.

    Raises:
        EmptyMatrix: no cell of the matrix is true.
    """
    rows = m.rows
    occupied = [r for r in range(3) if any(rows[r])]
    if not occupied:
        raise errors.EmptyMatrix("no knowledge sources at all")
    if len(occupied) == 1:
        return _won(occupied[0], t)
    y = min(col for col in range(len(rows[0]))
            if any(rows[r][col] for r in range(3)))
    live = [r for r in range(3) if rows[r][y]]
    if len(live) == 1:
        return _won(live[0], t)
    if len(live) == 2:
        return _resolve_pair(rows, tuple(live), y, t)
    return _resolve_three(rows, y, t)
