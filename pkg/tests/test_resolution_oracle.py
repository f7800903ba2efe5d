"""Exhaustive agreement between resolve_decision and its prose oracle.

Every 3 x 3 presence matrix (512 of them) is resolved against twenty
triples chosen to hit each tie sub-case: strict orders, two-way ties in
every position, ties with and without a strict winner, degenerate
one-hot triples, and the full three-way tie.
"""

from fractions import Fraction
from itertools import permutations, product

import pytest

import oracles
from roughkb import errors
from roughkb.evidence import PresenceMatrix, TruthTriple, resolve_decision

F = Fraction


def _uniq(perms):
    seen = []
    for p in perms:
        if p not in seen:
            seen.append(p)
    return seen

TRIPLES = (
    _uniq(permutations((F(2, 10), F(3, 10), F(5, 10))))      # strict orders
    + _uniq(permutations((F(1, 2), F(1, 2), F(0))))          # tie beats zero
    + _uniq(permutations((F(1), F(0), F(0))))                # one-hot
    + [(F(1, 3), F(1, 3), F(1, 3))]                          # three-way tie
    + _uniq(permutations((F(1, 4), F(1, 4), F(1, 2))))       # tie below winner
    + _uniq(permutations((F(2, 5), F(2, 5), F(1, 5))))       # tie above loser
    + [(F(6, 10), F(3, 10), F(1, 10))]
)


def _all_matrices(q=3):
    for bits in product((False, True), repeat=3 * q):
        yield tuple(tuple(bits[r * q:(r + 1) * q]) for r in range(3))


def test_twenty_triples_are_distinct():
    assert len(TRIPLES) == 20
    assert len(set(TRIPLES)) == 20


def test_every_matrix_and_triple_agrees():
    checked = 0
    for rows in _all_matrices():
        m = PresenceMatrix(rows)
        empty = not any(any(r) for r in rows)
        for triple in TRIPLES:
            t = TruthTriple(*triple)
            if empty:
                with pytest.raises(errors.EmptyMatrix):
                    resolve_decision(m, t)
                with pytest.raises(ValueError):
                    oracles.reference_resolve(rows, triple)
                continue
            vd, cf = resolve_decision(m, t)
            assert (int(vd), cf) == oracles.reference_resolve(rows, triple), (
                rows, triple)
            checked += 1
    assert checked == 511 * 20


def test_credibility_is_always_a_triple_component():
    for rows in _all_matrices():
        if not any(any(r) for r in rows):
            continue
        for triple in TRIPLES[:7]:
            vd, cf = resolve_decision(PresenceMatrix(rows), TruthTriple(*triple))
            assert cf in triple
            assert int(vd) in (0, 1, 2)
