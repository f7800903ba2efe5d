"""Evidence-file ingestion, KB persistence, rule export and the CLI.

Two text formats live here.  Evidence documents are the hand-authored
input: a line-oriented grammar declaring facts, source gradings,
priorities and per-source evidence counts.  Knowledge-base files are
the canonical persisted form of a built lattice: byte-stable, version
stamped, nodes in level-major label order.  Both round-trip: parsing
then rendering a document reproduces it, and serializing a loaded KB
file reproduces the file.

The command line wraps the whole pipeline (build, approximations,
rules, edits, consistency check) with deterministic output and
atomic file replacement.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import re
import shlex
import sys
import tempfile
from fractions import Fraction
from importlib import resources
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from . import errors
from ._num import ONE, ZERO, frac, publish2, render
from .evidence import (EvidenceProfile, SourceGrading, TruthTriple,
                       presence_matrix, resolve_decision, truth_triple)
from .lattice import (DEFAULT_ORDER_CAP, DropDecision, Fact, Lattice,
                      SetDecision, _build_structure, build_kb, check_structure,
                      delete_fact, facts_of, insert_fact, modify_node)
from .minimizer import generate_rules
from .propagation import DecisionEntry, PriorityConfig, propagate
from .roughset import approximations

FORMAT_NAME = "roughkb-kb"
FORMAT_VERSION = 1

_NAME_RE = re.compile(r"[A-Za-z0-9_.-]+\Z")
_FACT_RE = re.compile(r"f([1-9]\d*)\Z")


# --- evidence documents -----------------------------------------------------

@dataclasses.dataclass(frozen=True)
class EvidenceRecord:
    """One line of evidence: sources of one kind at one level."""

    facts: Tuple[int, ...]
    disease: str
    m: int
    level: int
    count: int


@dataclasses.dataclass(frozen=True)
class EvidenceDocument:
    """A parsed evidence file, with records in canonical order."""

    module: str
    q: int
    facts: Tuple[Fact, ...]
    priorities: PriorityConfig
    records: Tuple[EvidenceRecord, ...]
    alpha: Fraction = ZERO

    def diseases(self) -> Tuple[str, ...]:
        return tuple(sorted({r.disease for r in self.records}))


def _name_token(token: str, what: str, line_no: int) -> str:
    if not _NAME_RE.match(token):
        raise errors.SyntaxError("bad %s name %r" % (what, token), line_no)
    return token


def _fact_token(token: str, line_no: int) -> int:
    match = _FACT_RE.match(token)
    if not match:
        raise errors.SyntaxError("expected a fact reference like f1, got %r"
                                 % (token,), line_no)
    return int(match.group(1))


def _known_fact(fid: int, declared, line_no: int) -> int:
    if fid not in declared:
        raise errors.UnknownFactRef("fact f%d is not declared" % fid, line_no)
    return fid


def _factset_token(token: str, declared, line_no: int) -> Tuple[int, ...]:
    fids = [_known_fact(_fact_token(part, line_no), declared, line_no)
            for part in token.split("+")]
    if len(set(fids)) != len(fids):
        raise errors.SyntaxError("repeated fact in %r" % (token,), line_no)
    return tuple(sorted(fids))


def _int_field(token: str, key: str, line_no: int) -> int:
    if not token.startswith(key + "="):
        raise errors.SyntaxError("expected %s=..., got %r" % (key, token), line_no)
    try:
        return int(token[len(key) + 1:])
    except ValueError:
        raise errors.SyntaxError("bad integer in %r" % (token,), line_no)


def parse_evidence(text: str) -> EvidenceDocument:
    """Parse an evidence document; all failures carry line numbers.

    Declarations are single-pass: facts must be declared before any
    priority or evidence line that references them, and the grading
    must precede the evidence records it bounds.

    Raises:
        SyntaxError: malformed line, missing header, duplicate record.
        UnknownFactRef: reference to an undeclared fact.
        LevelOutOfRange: evidence level outside 1..q.
    """
    module = None
    q = None
    alpha = ZERO
    facts: List[Fact] = []
    fact_ids = set()
    fact_pairs = set()
    global_priorities: Dict[Tuple[str, int], int] = {}
    scoped_priorities: Dict[Tuple[FrozenSet[int], str], Dict[int, int]] = {}
    records: List[EvidenceRecord] = []
    record_keys = set()

    for line_no, raw in enumerate(text.splitlines(), 1):
        try:
            tokens = shlex.split(raw, comments=True)
        except ValueError as exc:
            raise errors.SyntaxError(str(exc), line_no)
        if not tokens:
            continue
        head = tokens[0]
        if module is None:
            if head != "module" or len(tokens) != 2:
                raise errors.SyntaxError("no module header", line_no)
            module = _name_token(tokens[1], "module", line_no)
            continue

        if head == "module":
            raise errors.SyntaxError("duplicate module header", line_no)

        elif head == "grading":
            if q is not None:
                raise errors.SyntaxError("duplicate grading declaration", line_no)
            if len(tokens) != 2:
                raise errors.SyntaxError("expected: grading q=N", line_no)
            q = _int_field(tokens[1], "q", line_no)
            if q < 1:
                raise errors.SyntaxError("grading q must be positive", line_no)

        elif head == "alpha":
            if len(tokens) != 2:
                raise errors.SyntaxError("expected: alpha VALUE", line_no)
            try:
                alpha = Fraction(tokens[1])
            except (ValueError, ZeroDivisionError):
                raise errors.SyntaxError("bad alpha %r" % (tokens[1],), line_no)
            if not ZERO <= alpha <= ONE:
                raise errors.SyntaxError("alpha outside [0, 1]", line_no)

        elif head == "fact":
            if len(tokens) != 4:
                raise errors.SyntaxError(
                    'expected: fact fN "attribute" "value"', line_no)
            fid = _fact_token(tokens[1], line_no)
            attribute, value = tokens[2], tokens[3]
            if fid in fact_ids:
                raise errors.SyntaxError("fact f%d declared twice" % fid, line_no)
            if (attribute, value) in fact_pairs:
                raise errors.SyntaxError(
                    "fact %r / %r declared twice" % (attribute, value), line_no)
            fact_ids.add(fid)
            fact_pairs.add((attribute, value))
            facts.append(Fact(fid, attribute, value))

        elif head == "priority":
            if len(tokens) < 4:
                raise errors.SyntaxError(
                    "expected: priority DISEASE f1 2, or a scoped form", line_no)
            disease = _name_token(tokens[1], "disease", line_no)
            if "+" not in tokens[2] and "=" not in tokens[3]:
                if len(tokens) != 4:
                    raise errors.SyntaxError("expected: priority DISEASE fN P",
                                             line_no)
                fid = _known_fact(_fact_token(tokens[2], line_no), fact_ids,
                                  line_no)
                try:
                    p = int(tokens[3])
                except ValueError:
                    raise errors.SyntaxError("bad priority %r" % (tokens[3],),
                                             line_no)
                if p < 1:
                    raise errors.SyntaxError("priority must be positive", line_no)
                if (disease, fid) in global_priorities:
                    raise errors.SyntaxError(
                        "duplicate priority for %s f%d" % (disease, fid), line_no)
                global_priorities[(disease, fid)] = p
            else:
                fset = frozenset(_factset_token(tokens[2], fact_ids, line_no))
                assigned = {}
                for token in tokens[3:]:
                    if "=" not in token:
                        raise errors.SyntaxError("expected fN=P, got %r"
                                                 % (token,), line_no)
                    ref, _, val = token.partition("=")
                    fid = _fact_token(ref, line_no)
                    try:
                        p = int(val)
                    except ValueError:
                        raise errors.SyntaxError("bad priority %r" % (val,),
                                                 line_no)
                    if p < 1:
                        raise errors.SyntaxError("priority must be positive",
                                                 line_no)
                    if fid in assigned:
                        raise errors.SyntaxError("f%d assigned twice" % fid,
                                                 line_no)
                    assigned[fid] = p
                if set(assigned) != set(fset):
                    raise errors.SyntaxError(
                        "scoped priorities must cover the fact set exactly",
                        line_no)
                if (fset, disease) in scoped_priorities:
                    raise errors.SyntaxError(
                        "duplicate scoped priority for %s" % disease, line_no)
                scoped_priorities[(fset, disease)] = assigned

        elif head == "evidence":
            if len(tokens) != 6:
                raise errors.SyntaxError(
                    "expected: evidence FACTS DISEASE m=M level=J count=K",
                    line_no)
            if q is None:
                raise errors.SyntaxError("grading must precede evidence",
                                         line_no)
            fset = _factset_token(tokens[1], fact_ids, line_no)
            disease = _name_token(tokens[2], "disease", line_no)
            m = _int_field(tokens[3], "m", line_no)
            if m not in (1, 2, 3):
                raise errors.SyntaxError("assertion kind m must be 1, 2 or 3",
                                         line_no)
            level = _int_field(tokens[4], "level", line_no)
            if not 1 <= level <= q:
                raise errors.LevelOutOfRange(
                    "level %d outside 1..%d" % (level, q), line_no)
            count = _int_field(tokens[5], "count", line_no)
            if count < 0:
                raise errors.SyntaxError("count must be nonnegative", line_no)
            key = (fset, disease, m, level)
            if key in record_keys:
                raise errors.SyntaxError("duplicate evidence record", line_no)
            record_keys.add(key)
            records.append(EvidenceRecord(fset, disease, m, level, count))

        else:
            raise errors.SyntaxError("unknown directive %r" % (head,), line_no)

    if module is None:
        raise errors.SyntaxError("no module header")
    if q is None:
        raise errors.SyntaxError("no grading declaration")
    if fact_ids != set(range(1, len(facts) + 1)):
        raise errors.SyntaxError("fact ids must be f1..f%d contiguously"
                                 % len(facts))
    facts.sort(key=lambda f: f.id)
    records.sort(key=lambda r: (r.facts, r.disease, r.m, r.level))
    return EvidenceDocument(module, q, tuple(facts),
                            PriorityConfig(global_priorities, scoped_priorities),
                            tuple(records), alpha)


def _quoted(text: str) -> str:
    if '"' in text or "\n" in text:
        raise errors.OutOfRange("cannot render text containing quotes: %r"
                                % (text,))
    return '"%s"' % text


def render_evidence(doc: EvidenceDocument) -> str:
    """Canonical text of a document; parse(render(doc)) == doc."""
    lines = ["module %s" % doc.module, "grading q=%d" % doc.q]
    if doc.alpha != 0:
        lines.append("alpha %s" % doc.alpha)
    for fact in doc.facts:
        lines.append("fact f%d %s %s"
                     % (fact.id, _quoted(fact.attribute), _quoted(fact.value)))
    for (disease, fid), p in sorted(doc.priorities.global_priorities.items()):
        lines.append("priority %s f%d %d" % (disease, fid, p))
    for (fset, disease), prio in sorted(
            doc.priorities.scoped.items(),
            key=lambda item: (sorted(item[0][0]), item[0][1])):
        refs = "+".join("f%d" % f for f in sorted(fset))
        parts = " ".join("f%d=%d" % (f, prio[f]) for f in sorted(prio))
        lines.append("priority %s %s %s" % (disease, refs, parts))
    for rec in doc.records:
        refs = "+".join("f%d" % f for f in rec.facts)
        lines.append("evidence %s %s m=%d level=%d count=%d"
                     % (refs, rec.disease, rec.m, rec.level, rec.count))
    return "\n".join(lines) + "\n"


# --- building ---------------------------------------------------------------

def _resolved_decisions(doc: EvidenceDocument, round2: bool):
    """Resolve every record group into (vd, cf, triple) per fact set."""
    grading = SourceGrading(doc.q)
    grouped: Dict[Tuple[Tuple[int, ...], str], Dict[int, Dict[int, int]]] = {}
    for rec in doc.records:
        rows = grouped.setdefault((rec.facts, rec.disease), {})
        rows.setdefault(rec.m, {})[rec.level] = rec.count
    resolved = {}
    for (fset, disease), rows in sorted(grouped.items()):
        profile = EvidenceProfile.from_levels(rows, doc.q)
        triple = truth_triple(profile, grading)
        if round2:
            triple = TruthTriple(*(publish2(c) for c in triple))
        vd, cf = resolve_decision(presence_matrix(profile), triple)
        resolved[(fset, disease)] = (vd, cf, triple)
    return resolved


def build_from_document(doc: EvidenceDocument, alpha=None, round2: bool = False,
                        order_cap: int = DEFAULT_ORDER_CAP) -> Lattice:
    """Evidence to lattice: resolve, build, propagate.

    Single-fact records become atomic decisions; multi-fact records are
    resolved the same way and merged into their nodes as direct
    evidence during propagation.  ``alpha`` overrides the document's
    declared gate when given.
    """
    atomics: Dict[int, List[DecisionEntry]] = {}
    external: Dict[FrozenSet[int], Dict[str, tuple]] = {}
    for (fset, disease), (vd, cf, triple) in _resolved_decisions(doc, round2).items():
        if len(fset) == 1:
            fid = fset[0]
            atomics.setdefault(fid, []).append(
                DecisionEntry(disease, vd, cf, tv=triple, weights={fid: ONE}))
        else:
            external.setdefault(frozenset(fset), {})[disease] = (vd, cf, triple)
    kb = build_kb(doc.facts, atomics, order_cap=order_cap)
    gate = doc.alpha if alpha is None else frac(alpha)
    return propagate(kb, priorities=doc.priorities, external=external,
                     alpha=gate, round2=round2)


def fixture_document() -> EvidenceDocument:
    """The shipped low-back-pain evidence corpus."""
    text = resources.files(__package__).joinpath(
        "data/low_back_pain.evd").read_text(encoding="utf-8")
    return parse_evidence(text)


# --- KB persistence ---------------------------------------------------------

def _decimals(round2: bool) -> int:
    return 2 if round2 else 6


def serialize_kb(kb: Lattice) -> str:
    """Canonical, byte-stable text form of a lattice.

    Credibilities and truth components render as decimals at the mode's
    precision; the gate and the per-fact weights stay exact rationals.
    """
    places = _decimals(kb.round2)
    lines = ["%s %d" % (FORMAT_NAME, FORMAT_VERSION),
             "mode %s" % ("round2" if kb.round2 else "exact"),
             "alpha %s" % kb.alpha,
             "order %d" % kb.n]
    for fact in kb.facts:
        lines.append("fact f%d %s %s"
                     % (fact.id, _quoted(fact.attribute), _quoted(fact.value)))
    for (disease, fid), p in sorted(kb.priorities.global_priorities.items()):
        lines.append("priority %s f%d %d" % (disease, fid, p))
    for (fset, disease), prio in sorted(
            kb.priorities.scoped.items(),
            key=lambda item: (sorted(item[0][0]), item[0][1])):
        refs = "+".join("f%d" % f for f in sorted(fset))
        parts = " ".join("f%d=%d" % (f, prio[f]) for f in sorted(prio))
        lines.append("priority %s %s %s" % (disease, refs, parts))
    for level_labels in kb.levels:
        for label in level_labels:
            lines.append("node %s" % label)
            node = kb.nodes[label]
            for disease in sorted(node.decisions):
                entry = node.decisions[disease]
                tv = ("-" if entry.tv is None else
                      "/".join(render(c, places) for c in entry.tv))
                weights = ("-" if not entry.weights else
                           ",".join("f%d:%s" % (f, entry.weights[f])
                                    for f in sorted(entry.weights)))
                lines.append("decision %s vd=%d cf=%s tv=%s w=%s"
                             % (disease, int(entry.vd),
                                render(entry.cf, places), tv, weights))
    return "\n".join(lines) + "\n"


def _corrupt(message: str, line_no: Optional[int] = None):
    raise errors.CorruptRecord(message, line_no)


def _parse_decimal(token: str, line_no: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        _corrupt("bad number %r" % (token,), line_no)


def _field(token: str, key: str, line_no: int) -> str:
    if not token.startswith(key + "="):
        _corrupt("expected %s=..., got %r" % (key, token), line_no)
    return token[len(key) + 1:]


def load_kb(text: str) -> Lattice:
    """Parse a serialized knowledge base.

    Accepts node sections in any order but requires exactly the full
    2**n label population.

    Raises:
        VersionMismatch: recognized format at an unsupported version.
        CorruptRecord: anything else wrong, with the offending line.
    """
    lines = [(no, line.rstrip()) for no, line in
             enumerate(text.splitlines(), 1) if line.strip()]
    pos = 0

    def take(expected: str) -> Tuple[int, List[str]]:
        nonlocal pos
        if pos >= len(lines):
            _corrupt("unexpected end of file, wanted %r" % expected)
        no, line = lines[pos]
        parts = line.split()
        if parts[0] != expected:
            _corrupt("expected %r line, got %r" % (expected, parts[0]), no)
        pos += 1
        return no, parts

    if not lines:
        _corrupt("empty file")
    no, first = lines[0]
    parts = first.split()
    if parts[0] != FORMAT_NAME:
        _corrupt("not a %s file" % FORMAT_NAME, no)
    if len(parts) != 2 or not parts[1].isdigit():
        _corrupt("bad version header", no)
    if int(parts[1]) != FORMAT_VERSION:
        raise errors.VersionMismatch(
            "file version %s, supported version %d" % (parts[1], FORMAT_VERSION))
    pos = 1

    no, parts = take("mode")
    if len(parts) != 2 or parts[1] not in ("exact", "round2"):
        _corrupt("mode must be exact or round2", no)
    round2 = parts[1] == "round2"
    places = _decimals(round2)

    no, parts = take("alpha")
    if len(parts) != 2:
        _corrupt("bad alpha line", no)
    alpha = _parse_decimal(parts[1], no)

    no, parts = take("order")
    if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
        _corrupt("bad order line", no)
    n = int(parts[1])

    facts = []
    for fid in range(1, n + 1):
        no, line = lines[pos] if pos < len(lines) else (None, "")
        if not line.startswith("fact "):
            _corrupt("expected %d fact lines" % n, no)
        try:
            tokens = shlex.split(line)
        except ValueError as exc:
            _corrupt(str(exc), no)
        if len(tokens) != 4 or _FACT_RE.match(tokens[1]) is None \
                or int(tokens[1][1:]) != fid:
            _corrupt("expected fact f%d declaration" % fid, no)
        facts.append(Fact(fid, tokens[2], tokens[3]))
        pos += 1

    global_priorities = {}
    scoped = {}
    while pos < len(lines) and lines[pos][1].startswith("priority "):
        no, line = lines[pos]
        tokens = line.split()
        try:
            if len(tokens) == 4 and "=" not in tokens[3]:
                global_priorities[(tokens[1], _fact_token(tokens[2], no))] = \
                    int(tokens[3])
            else:
                fset = frozenset(_fact_token(t, no)
                                 for t in tokens[2].split("+"))
                prio = {}
                for token in tokens[3:]:
                    ref, _, val = token.partition("=")
                    prio[_fact_token(ref, no)] = int(val)
                scoped[(fset, tokens[1])] = prio
        except (errors.SyntaxError, ValueError):
            _corrupt("bad priority line", no)
        pos += 1

    levels, nodes = _build_structure(n)
    seen = set()
    declared = set()
    current: Optional[str] = None
    decisions: Dict[str, DecisionEntry] = {}

    def flush():
        if current is not None:
            nodes[current] = nodes[current].replace_decisions(decisions)

    while pos < len(lines):
        no, line = lines[pos]
        parts = line.split()
        if parts[0] == "node":
            flush()
            if len(parts) != 2 or parts[1] not in nodes:
                _corrupt("unknown node label", no)
            if parts[1] in seen:
                _corrupt("node %s listed twice" % parts[1], no)
            seen.add(parts[1])
            current = parts[1]
            decisions = {}
        elif parts[0] == "decision":
            if current is None:
                _corrupt("decision before any node", no)
            if len(parts) != 6:
                _corrupt("bad decision line", no)
            disease = parts[1]
            vd = _field(parts[2], "vd", no)
            cf = _parse_decimal(_field(parts[3], "cf", no), no)
            tv_text = _field(parts[4], "tv", no)
            w_text = _field(parts[5], "w", no)
            tv = None
            if tv_text != "-":
                comps = tv_text.split("/")
                if len(comps) != 3:
                    _corrupt("truth triple needs three components", no)
                tv = tuple(_parse_decimal(c, no) for c in comps)
            weights = {}
            if w_text != "-":
                for item in w_text.split(","):
                    ref, _, val = item.partition(":")
                    try:
                        weights[_fact_token(ref, no)] = Fraction(val)
                    except (errors.SyntaxError, ValueError, ZeroDivisionError):
                        _corrupt("bad weight %r" % (item,), no)
            if disease in decisions:
                _corrupt("node %s decides %r twice" % (current, disease), no)
            if not set(weights) <= facts_of(current):
                _corrupt("weights reference facts outside the condition", no)
            try:
                entry = DecisionEntry(disease, int(vd), cf, tv=tv,
                                      weights=weights)
            except (errors.KbError, ValueError):
                _corrupt("bad decision values", no)
            decisions[disease] = entry
            declared.add(disease)
        else:
            _corrupt("unexpected %r line in node section" % parts[0], no)
        pos += 1
    flush()

    if seen != set(nodes):
        _corrupt("file lists %d of %d nodes" % (len(seen), len(nodes)))
    declared.update(d for _, d in scoped)
    declared.update(d for d, _ in global_priorities)
    try:
        priorities = PriorityConfig(global_priorities, scoped)
    except errors.KbError:
        _corrupt("inconsistent priority declarations")
    return Lattice(facts, nodes, levels, alpha=alpha, priorities=priorities,
                   round2=round2, declared=declared)


# --- rule export ------------------------------------------------------------

def _literal_phrase(kb: Lattice, fid: int, positive: bool) -> str:
    fact = kb.fact(fid)
    phrase = "(%s, %s)" % (fact.attribute, fact.value)
    return phrase if positive else "NOT " + phrase


def _condition_phrase(kb: Lattice, expr) -> str:
    if frozenset() in expr.terms:
        return "TRUE"
    parts = []
    for term in expr.ordered_terms():
        text = " AND ".join(_literal_phrase(kb, f, p) for f, p in sorted(term))
        parts.append("(%s)" % text if len(expr.terms) > 1 and len(term) > 1
                     else text)
    return " OR ".join(parts)


def render_rules_text(rules, kb: Lattice) -> str:
    """Numbered human-readable rule list with metrics."""
    places = _decimals(kb.round2)
    out = []
    for idx, rule in enumerate(rules, 1):
        m = rule.metrics
        out.append(
            "Rule %d: %s -> (%s, %d) [%s]"
            " support=%s strength=%s certainty=%s coverage=%s"
            % (idx, _condition_phrase(kb, rule.condition), rule.disease,
               int(rule.vd), rule.kind,
               render(m.support, places), render(m.strength, places),
               render(m.certainty, places), render(m.coverage, places)))
    return "".join(line + "\n" for line in out)


def render_rules_records(rules, kb: Lattice) -> str:
    """Tab-separated rule records: disease, vd, kind, condition,
    source labels, support, strength, certainty, coverage."""
    places = _decimals(kb.round2)
    out = []
    for rule in rules:
        m = rule.metrics
        out.append("\t".join([
            rule.disease, str(int(rule.vd)), rule.kind, str(rule.condition),
            ",".join(sorted(rule.source_labels)),
            render(m.support, places), render(m.strength, places),
            render(m.certainty, places), render(m.coverage, places)]))
    return "".join(line + "\n" for line in out)


# --- command line -----------------------------------------------------------

def _write_atomically(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    handle = tempfile.NamedTemporaryFile("w", dir=directory, delete=False,
                                         encoding="utf-8",
                                         prefix=".%s." % os.path.basename(path))
    try:
        with handle as stream:
            stream.write(text)
        os.replace(handle.name, path)
    except BaseException:
        try:
            os.unlink(handle.name)
        except OSError:
            pass
        raise


def _load_file(path: str) -> Lattice:
    with open(path, "r", encoding="utf-8") as stream:
        return load_kb(stream.read())


def _all_approximations(kb: Lattice):
    return {disease: approximations(kb, disease) for disease in kb.diseases()}


class _PrintingObserver:
    """Reports incremental approximation maintenance on stdout."""

    def __init__(self, stream):
        self.stream = stream

    def decisions_added(self, disease, pairs):
        for label, vd in pairs:
            print("added %s %s vd=%d" % (disease, label, int(vd)),
                  file=self.stream)

    def decisions_removed(self, disease, pairs):
        for label, vd in pairs:
            print("removed %s %s vd=%d" % (disease, label, int(vd)),
                  file=self.stream)

    def truth_changed(self, disease, label, old_vd, new_vd):
        print("changed %s %s vd=%d->%d"
              % (disease, label, int(old_vd), int(new_vd)), file=self.stream)


def _cmd_build(args) -> int:
    with open(args.evidence, "r", encoding="utf-8") as stream:
        doc = parse_evidence(stream.read())
    kb = build_from_document(doc, alpha=args.alpha, round2=args.round2)
    _write_atomically(args.output, serialize_kb(kb))
    return 0


def _cmd_approx(args) -> int:
    kb = _load_file(args.kb)
    sets = approximations(kb, args.disease)
    for name in ("lower1", "upper1", "boundary1",
                 "lower2", "upper2", "boundary2"):
        labels = sorted(getattr(sets, name))
        print(("%s: %s" % (name, " ".join(labels))).rstrip())
    return 0


def _cmd_rules(args) -> int:
    kb = _load_file(args.kb)
    kinds = tuple(k for k in args.kinds.split(",") if k)
    rules = generate_rules(kb, _all_approximations(kb), kinds)
    text = (render_rules_records(rules, kb) if args.format == "records"
            else render_rules_text(rules, kb))
    sys.stdout.write(text)
    return 0


def _parse_cli_decision(spec: Sequence[str]) -> DecisionEntry:
    disease, vd, cf = spec
    try:
        return DecisionEntry(disease, int(vd), Fraction(cf))
    except ValueError:
        raise errors.OutOfRange("bad decision %r" % (" ".join(spec),))


def _cmd_insert_fact(args) -> int:
    kb = _load_file(args.kb)
    fact = Fact(kb.n + 1, args.attribute, args.value)
    atomic = [_parse_cli_decision(spec) for spec in args.decision or []]
    kb = insert_fact(kb, fact, atomic)
    _write_atomically(args.kb, serialize_kb(kb))
    return 0


def _fact_id_arg(token: str) -> int:
    match = _FACT_RE.match(token)
    if match:
        return int(match.group(1))
    if token.isdigit() and int(token) > 0:
        return int(token)
    raise errors.UnknownFact("bad fact reference %r" % (token,))


def _cmd_delete_fact(args) -> int:
    kb = _load_file(args.kb)
    kb = delete_fact(kb, _fact_id_arg(args.fact))
    _write_atomically(args.kb, serialize_kb(kb))
    return 0


def _cmd_set_decision(args) -> int:
    kb = _load_file(args.kb)
    if args.drop:
        change = DropDecision(args.disease)
    else:
        if args.vd is None or args.cf is None:
            raise errors.OutOfRange(
                "set-decision needs --vd and --cf unless --drop is given")
        change = SetDecision(args.disease, args.vd, Fraction(args.cf))
    kb = modify_node(kb, args.label, change,
                     observer=_PrintingObserver(sys.stdout))
    _write_atomically(args.kb, serialize_kb(kb))
    return 0


def _cmd_check(args) -> int:
    kb = _load_file(args.kb)
    problems = check_structure(kb)
    from .metrics import check_properties
    report = check_properties(kb, _all_approximations(kb))
    if problems:
        print("structure: %d problem%s"
              % (len(problems), "" if len(problems) == 1 else "s"))
        for problem in problems:
            print("  " + problem)
    else:
        print("structure: ok (%d nodes)" % len(kb.nodes))
    if report.ok:
        print("properties: ok (%d checks)" % report.checked)
    else:
        print("properties: %d failure%s"
              % (len(report.failures), "" if len(report.failures) == 1 else "s"))
        for prop, disease, vd, detail in report.failures:
            print("  property %d, %s vd=%d: %s" % (prop, disease, vd, detail))
    return 1 if problems or not report.ok else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roughkb",
        description="Lattice knowledge bases with rough-set rule induction.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a KB file from an evidence document")
    p.add_argument("evidence")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--alpha", type=Fraction, default=None,
                   help="override the document's gate threshold")
    p.add_argument("--round2", action="store_true",
                   help="publish all derived quantities at two decimals")
    p.set_defaults(run=_cmd_build)

    p = sub.add_parser("approx", help="print the six approximation regions")
    p.add_argument("kb")
    p.add_argument("--disease", required=True)
    p.set_defaults(run=_cmd_approx)

    p = sub.add_parser("rules", help="minimize and rank decision rules")
    p.add_argument("kb")
    p.add_argument("--kinds", default="certain",
                   help="comma list of certain,possible,uncertain")
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.set_defaults(run=_cmd_rules)

    p = sub.add_parser("insert-fact", help="append a fact and re-derive")
    p.add_argument("kb")
    p.add_argument("--attribute", required=True)
    p.add_argument("--value", required=True)
    p.add_argument("--decision", nargs=3, action="append",
                   metavar=("DISEASE", "VD", "CF"),
                   help="atomic decision for the new fact (repeatable)")
    p.set_defaults(run=_cmd_insert_fact)

    p = sub.add_parser("delete-fact", help="remove a fact and shrink the KB")
    p.add_argument("kb")
    p.add_argument("--fact", required=True, help="fact id, e.g. f2 or 2")
    p.set_defaults(run=_cmd_delete_fact)

    p = sub.add_parser("set-decision", help="edit one node's decision")
    p.add_argument("kb")
    p.add_argument("--label", required=True)
    p.add_argument("--disease", required=True)
    p.add_argument("--vd", type=int)
    p.add_argument("--cf")
    p.add_argument("--drop", action="store_true",
                   help="remove the decision instead of setting it")
    p.set_defaults(run=_cmd_set_decision)

    p = sub.add_parser("check", help="structural invariants and rule identities")
    p.add_argument("kb")
    p.set_defaults(run=_cmd_check)
    return parser


def cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line; returns the exit status (0 ok, 1 domain
    error, 2 usage error)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.run(args)
    except errors.KbError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


def main():
    sys.exit(cli())


if __name__ == "__main__":
    main()
