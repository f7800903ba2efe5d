#!/usr/bin/env python3
"""Live maintenance of a knowledge base: edits, ripples, and round trips.

Three short scenes on the bundled low-back-pain lattice:

  1. flip one atomic truth value and watch the change ripple through
     every composite node that depends on it (an observer narrates);
  2. grow the lattice by a fourth symptom, then remove it again and
     check that the original structure comes back exactly;
  3. maintain one disease's approximation regions incrementally while
     decisions change, and confirm they always equal a from-scratch
     recomputation.
"""

from fractions import Fraction

from roughkb import kbio
from roughkb.lattice import Fact, SetDecision, delete_fact, insert_fact, modify_node
from roughkb.propagation import DecisionEntry
from roughkb.roughset import (ApproximationSets, approximations,
                              on_truth_changed)


class Narrator:
    def decisions_added(self, disease, pairs):
        for label, vd in pairs:
            print("   + %s gained %s (vd=%d)" % (label, disease, int(vd)))

    def decisions_removed(self, disease, pairs):
        for label, vd in pairs:
            print("   - %s lost %s (was vd=%d)" % (label, disease, int(vd)))

    def truth_changed(self, disease, label, old_vd, new_vd):
        print("   ~ %s: %s moved vd %d -> %d"
              % (label, disease, int(old_vd), int(new_vd)))


def scene_ripple(kb):
    print("scene 1: declare MPS absent on node 001 and watch the cone above")
    out = modify_node(kb, "001", SetDecision("MPS", 0, Fraction(22, 25)),
                      observer=Narrator())
    print("   001 is now vd=%d, and the top node followed: vd=%d\n"
          % (int(out.node("001").decisions["MPS"].vd),
             int(out.node("111").decisions["MPS"].vd)))
    return out


def scene_grow_and_shrink(kb):
    print("scene 2: insert a fourth symptom, then take it out again")
    grown = insert_fact(kb, Fact(4, "numbness in leg", "yes"),
                        [DecisionEntry("PIVD", 1, Fraction(7, 10))])
    print("   grown to %d nodes; new atomic node 1000 decided PIVD vd=%d"
          % (len(grown.nodes), int(grown.node("1000").decisions["PIVD"].vd)))
    back = delete_fact(grown, 4)
    print("   deleted fact 4 again; lattice equals the original: %s\n"
          % (back == kb))


def scene_incremental(kb):
    print("scene 3: maintain PIVD's regions incrementally under edits")
    disease = "PIVD"
    vd_map = {label: int(node.decisions[disease].vd)
              for label, node in kb.nodes.items()
              if disease in node.decisions}
    sets = approximations(kb, disease)
    for label, new_vd in (("100", 1), ("111", 0), ("100", 2)):
        old = vd_map[label]
        sets = on_truth_changed(sets, label, old, new_vd)
        vd_map[label] = new_vd
        fresh = ApproximationSets.from_vd_map(vd_map)
        print("   %s vd %d->%d   incremental == recomputed: %s"
              % (label, old, new_vd, sets == fresh))
    print("   final lower1: %s" % " ".join(sorted(sets.lower1)))


def main():
    kb = kbio.build_from_document(kbio.fixture_document(), round2=True)
    scene_ripple(kb)
    scene_grow_and_shrink(kb)
    scene_incremental(kb)


if __name__ == "__main__":
    main()
