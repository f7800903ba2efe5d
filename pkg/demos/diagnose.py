#!/usr/bin/env python3
"""End-to-end tour of the bundled low-back-pain knowledge base.

Builds the lattice from the shipped evidence file, then walks the whole
pipeline: truth triples on the atomic nodes, propagated composite
decisions, rough-set approximations per disease, and finally the ranked
decision rules.  Everything is printed in the two-decimal publication
mode so the numbers line up with what the CLI emits.
"""

from roughkb import kbio
from roughkb.minimizer import generate_rules
from roughkb.roughset import approximations

VD_TEXT = {0: "absent", 1: "present", 2: "inconclusive"}


def show_atomics(kb):
    print("=== atomic decisions (one symptom at a time) ===")
    for label in kb.levels[1]:
        node = kb.node(label)
        fact = kb.fact(next(iter(node.condition)))
        print("node %s  (%s = %s)" % (label, fact.attribute, fact.value))
        for disease, e in sorted(node.decisions.items()):
            tv = "  tv=(%.2f, %.2f, %.2f)" % tuple(map(float, e.tv)) if e.tv else ""
            print("   %-5s %-13s cf=%.2f%s"
                  % (disease, VD_TEXT[int(e.vd)], float(e.cf), tv))
    print()


def show_composites(kb):
    print("=== propagated composite decisions ===")
    for level in range(2, kb.n + 1):
        for label in kb.levels[level]:
            node = kb.node(label)
            if not node.decisions:
                continue
            row = ", ".join("%s:%s/%.2f" % (d, int(e.vd), float(e.cf))
                            for d, e in sorted(node.decisions.items()))
            print("node %s  %s" % (label, row))
    print()


def show_approximations(kb):
    print("=== rough-set regions per disease ===")
    for disease in kb.diseases():
        sets = approximations(kb, disease)
        print(disease)
        for key in ("lower1", "upper1", "boundary1",
                    "lower2", "upper2", "boundary2"):
            labels = " ".join(sorted(getattr(sets, key))) or "-"
            print("   %-10s %s" % (key, labels))
    print()


def show_rules(kb):
    approx = {d: approximations(kb, d) for d in kb.diseases()}
    rules = generate_rules(kb, approx)
    # the exactly-approximated disease also admits a possible rule with
    # the same condition; list it the way the ranked table does
    for disease in kb.diseases():
        if not approx[disease].boundary1 and approx[disease].upper1:
            rules += generate_rules(kb, {disease: approx[disease]},
                                    kinds=("possible",))
    print("=== ranked decision rules ===")
    print(kbio.render_rules_text(rules, kb), end="")


def main():
    doc = kbio.fixture_document()
    kb = kbio.build_from_document(doc, round2=True)
    print("module %r: %d facts, %d diseases, %d lattice nodes\n"
          % (doc.module, kb.n, len(kb.diseases()), len(kb.nodes)))
    show_atomics(kb)
    show_composites(kb)
    show_approximations(kb)
    show_rules(kb)


if __name__ == "__main__":
    main()
