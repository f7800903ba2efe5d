#!/usr/bin/env python3
"""Boolean cover minimization and the credibility gate, side by side.

First half: feed a few minterm sets to the minimizer and print the
sum-of-products cover it finds, plus the factored reading when the
terms share literals.  Second half: build one random knowledge base at
increasing gate thresholds and watch weakly-supported composite
decisions disappear.
"""

import random
from fractions import Fraction

from roughkb.lattice import Fact, build_kb
from roughkb.minimizer import minimize
from roughkb.propagation import DecisionEntry, propagate

COVERS = [
    # labels print the highest fact first, so "1000" means f4 alone
    ("a rectangle of four cells", 4, {"1000", "1001", "1101", "1100"}),
    ("seven cells, one factorable cover", 4,
     {"1100", "1101", "1001", "1111", "1011", "1010", "1110"}),
    ("an odd scatter", 3, {"001", "010", "111"}),
]


def tour_covers():
    print("=== cover minimization ===")
    for title, n, minterms in COVERS:
        expr = minimize(frozenset(minterms), n)
        print("%s  %s" % (title, sorted(minterms)))
        print("   cover:    %s" % expr)
        factored = expr.factored()
        if factored != str(expr):
            print("   factored: %s" % factored)
        assert expr.truth_set() == frozenset(minterms)
    print()


def random_kb(alpha):
    rng = random.Random(20260823)
    facts = [Fact(i, "sign%d" % i, "yes") for i in (1, 2, 3, 4)]
    atomics = {}
    for fid in (1, 2, 3, 4):
        per = []
        for disease in ("ANK", "BUR"):
            if rng.random() < 0.85:
                per.append(DecisionEntry(disease, rng.randrange(3),
                                         Fraction(rng.randint(1, 20), 20)))
        atomics[fid] = per
    return propagate(build_kb(facts, atomics), alpha=alpha, round2=True)


def tour_gate():
    print("=== credibility gate ===")
    print("same evidence, rising alpha; composite decisions that fail the")
    print("gate drop out instead of lingering with tiny credibilities")
    for alpha in (Fraction(0), Fraction(1, 20), Fraction(1, 8), Fraction(1, 4)):
        kb = random_kb(alpha)
        kept = sum(len(kb.node(label).decisions)
                   for level in range(2, kb.n + 1)
                   for label in kb.levels[level])
        print("   alpha=%-5s composite decisions kept: %d" % (alpha, kept))


if __name__ == "__main__":
    tour_covers()
    tour_gate()
