"""Patterns over triple graphs and the declarative satisfaction checker.

A pattern couples a positive triple graph Q with an optional positive
precondition C (a subtriple of Q), negative preconditions and negative
postconditions (each an extension of Q).  All embeddings are id-inclusions:
C's ids are a subset of Q's, and every negative condition contains Q
literally plus fresh elements.  That keeps documents human-writable and
makes the directed-base constructions plain subgraph arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graphs import GraphError
from .triples import (EMPTY_TRIPLE, MetamodelTriple, TripleGraph,
                      TripleMorphism, TypeGraphMismatch, are_triples_isomorphic,
                      find_triple_monomorphisms, mirror, mirror_metamodel,
                      validate_triple)

DIRECTIONS = ("forward", "backward")

POSITIVE = "positive"
NEGATIVE = "negative"
VIOLATED = "violated"


class PatternError(GraphError):
    """Ill-formed pattern or specification."""


@dataclass(frozen=True)
class Pattern:
    """An S-, C- or N-pattern.

    kind 'S': no positive precondition.  kind 'C': pos_pre is a subtriple of
    positive.  kind 'N': everything empty except a single negative
    postcondition, the forbidden graph.
    """

    name: str
    kind: str
    pos_pre: TripleGraph = EMPTY_TRIPLE
    positive: TripleGraph = EMPTY_TRIPLE
    neg_pre: tuple[tuple[str, TripleGraph], ...] = ()
    neg_post: tuple[tuple[str, TripleGraph], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "neg_pre", tuple((n, g) for n, g in self.neg_pre))
        object.__setattr__(self, "neg_post", tuple((n, g) for n, g in self.neg_post))
        if self.kind not in ("S", "C", "N"):
            raise PatternError(f"{self.name}: unknown pattern kind {self.kind!r}")
        if self.kind == "S" and not self.pos_pre.is_empty():
            raise PatternError(f"{self.name}: S-patterns carry no positive precondition")
        if self.kind == "N":
            if not (self.pos_pre.is_empty() and self.positive.is_empty()):
                raise PatternError(f"{self.name}: N-patterns have empty C and Q")
            if self.neg_pre or len(self.neg_post) != 1:
                raise PatternError(
                    f"{self.name}: N-patterns have exactly one negative "
                    "postcondition and no preconditions")
        if not self.positive.contains(self.pos_pre):
            raise PatternError(f"{self.name}: positive precondition is not a "
                               "subtriple of the positive graph")
        for label, conds in (("precondition", self.neg_pre),
                             ("postcondition", self.neg_post)):
            names = [n for n, _ in conds]
            if len(set(names)) != len(names):
                raise PatternError(f"{self.name}: duplicate negative {label} names")
            for n, g in conds:
                if not g.contains(self.positive):
                    raise PatternError(f"{self.name}: negative {label} {n} does not "
                                       "extend the positive graph")

    @property
    def forbidden(self) -> TripleGraph:
        if self.kind != "N":
            raise PatternError(f"{self.name} is not an N-pattern")
        return self.neg_post[0][1]

    def is_positive_kind(self) -> bool:
        return self.kind in ("S", "C")

    def component_triples(self) -> Iterable[TripleGraph]:
        yield self.positive
        yield self.pos_pre
        for _, g in self.neg_pre:
            yield g
        for _, g in self.neg_post:
            yield g


def n_pattern(name: str, forbidden: TripleGraph) -> Pattern:
    return Pattern(name, "N", neg_post=(("forbid", forbidden),))


@dataclass(frozen=True)
class Specification:
    """A metamodel triple and a conjunction of patterns."""

    metamodel: MetamodelTriple
    patterns: tuple[Pattern, ...]

    def __post_init__(self) -> None:
        names = [p.name for p in self.patterns]
        if len(set(names)) != len(names):
            raise PatternError("duplicate pattern names")

    def validate(self, initial: bool = True) -> list[str]:
        """Typing problems, plus the initial-form rule when ``initial``.

        Initially only N-patterns may carry negative postconditions; the
        deduction pipeline relaxes this for derived specifications.
        """
        problems = []
        for p in self.patterns:
            if initial and p.kind != "N" and p.neg_post:
                problems.append(f"{p.name}: only N-patterns may declare "
                                "negative postconditions initially")
            for t in p.component_triples():
                for v in validate_triple(t, self.metamodel):
                    problems.append(f"{p.name}: {v}")
        return problems

    def pattern(self, name: str) -> Pattern:
        for p in self.patterns:
            if p.name == name:
                return p
        raise KeyError(name)

    def positive_patterns(self) -> list[Pattern]:
        return [p for p in self.patterns if p.is_positive_kind()]

    def n_patterns(self) -> list[Pattern]:
        return [p for p in self.patterns if p.kind == "N"]


@dataclass(frozen=True)
class DirectedNegative:
    name: str
    graph: TripleGraph          # extends the base triple by id-inclusion
    excluded: bool              # isomorphic to the base, hence not evaluated


@dataclass(frozen=True)
class DirectedBase:
    """The directed trigger of a pattern: base triple, its embedding into Q,
    and the directed negative preconditions with iso-exclusion flags."""

    base: TripleGraph
    base_embed: TripleMorphism
    negatives: tuple[DirectedNegative, ...]


def _directed_triple(pattern: Pattern, graph_for_side: TripleGraph,
                     direction: str) -> TripleGraph:
    c = pattern.pos_pre
    if direction == "forward":
        return TripleGraph(graph_for_side.source, c.target, c.corr)
    return TripleGraph(c.source, graph_for_side.target, c.corr)


def directed_base(pattern: Pattern, direction: str) -> DirectedBase:
    """Base triple and directed negative preconditions for one direction.

    Forward keeps Q's source component and C's corr/target; a directed
    negative that collapses to the base itself (isomorphic) is flagged
    excluded, because such a condition constrains only the opposite side.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    base = _directed_triple(pattern, pattern.positive, direction)
    embed = TripleMorphism.inclusion(base, pattern.positive)
    negatives = []
    for name, cond in pattern.neg_pre:
        ng = _directed_triple(pattern, cond, direction)
        excluded = are_triples_isomorphic(ng, base) is not None
        negatives.append(DirectedNegative(name, ng, excluded))
    return DirectedBase(base, embed, tuple(negatives))


def match_assignment(m: TripleMorphism) -> tuple[tuple[str, str], ...]:
    """Canonical (pattern id, host id) pairs of a triple morphism."""
    pairs = (m.source_part.node_pairs + m.source_part.edge_pairs
             + m.target_part.node_pairs + m.target_part.edge_pairs
             + m.corr_pairs)
    return tuple(sorted(pairs))


def _anchor_of(m: TripleMorphism) -> dict[str, str]:
    return dict(match_assignment(m))


@dataclass(frozen=True)
class MatchReport:
    assignment: tuple[tuple[str, str], ...]
    classification: str
    detail: str = ""


def check_pattern(host: TripleGraph, pattern: Pattern, direction: str
                  ) -> list[MatchReport]:
    """Classify every base match of ``pattern`` in ``host`` for one direction.

    A match is negative when a non-excluded directed negative precondition
    extends it; positive when some occurrence of Q extends it and avoids
    every negative postcondition; violated otherwise.
    """
    db = directed_base(pattern, direction)
    reports = []
    for m in find_triple_monomorphisms(db.base, host):
        anchor = _anchor_of(m)
        blocked = None
        for neg in db.negatives:
            if neg.excluded:
                continue
            if find_triple_monomorphisms(neg.graph, host, anchor=anchor, limit=1):
                blocked = neg.name
                break
        if blocked is not None:
            reports.append(MatchReport(match_assignment(m), NEGATIVE, blocked))
            continue
        witnesses = find_triple_monomorphisms(pattern.positive, host, anchor=anchor)
        clean = None
        for w in witnesses:
            w_anchor = _anchor_of(w)
            if all(not find_triple_monomorphisms(g, host, anchor=w_anchor, limit=1)
                   for _, g in pattern.neg_post):
                clean = w
                break
        if clean is not None:
            reports.append(MatchReport(match_assignment(m), POSITIVE))
        else:
            detail = "no extension" if not witnesses else "all extensions hit a postcondition"
            reports.append(MatchReport(match_assignment(m), VIOLATED, detail))
    return sorted(reports, key=lambda r: r.assignment)


@dataclass(frozen=True)
class DirectionReport:
    pattern: str
    direction: str
    matches: tuple[MatchReport, ...]

    @property
    def verdict(self) -> str:
        if any(m.classification == VIOLATED for m in self.matches):
            return "violated"
        if not self.matches:
            return "vacuous"
        return "satisfied"

    @property
    def ok(self) -> bool:
        return self.verdict != "violated"


@dataclass(frozen=True)
class SatisfactionReport:
    entries: tuple[DirectionReport, ...]

    @property
    def satisfied(self) -> bool:
        return all(e.ok for e in self.entries)

    def entry(self, pattern: str, direction: str) -> DirectionReport:
        for e in self.entries:
            if e.pattern == pattern and e.direction == direction:
                return e
        raise KeyError((pattern, direction))

    def pattern_verdict(self, pattern: str) -> bool:
        return all(e.ok for e in self.entries if e.pattern == pattern)

    def violations(self) -> list[str]:
        return sorted({e.pattern for e in self.entries if not e.ok})


def check_spec(host: TripleGraph, spec: Specification) -> SatisfactionReport:
    """Check every pattern in both directions; the overall verdict is the
    conjunction.  The host must be well-typed over the specification's
    metamodel."""
    problems = validate_triple(host, spec.metamodel)
    if problems:
        raise TypeGraphMismatch("host is not typed over the specification "
                                "metamodel: " + "; ".join(problems))
    entries = []
    for p in sorted(spec.patterns, key=lambda p: p.name):
        for direction in DIRECTIONS:
            entries.append(DirectionReport(
                p.name, direction, tuple(check_pattern(host, p, direction))))
    return SatisfactionReport(tuple(entries))


# -- mirroring (used by symmetry tests) --------------------------------------

def mirror_pattern(p: Pattern) -> Pattern:
    return Pattern(p.name, p.kind, mirror(p.pos_pre), mirror(p.positive),
                   tuple((n, mirror(g)) for n, g in p.neg_pre),
                   tuple((n, mirror(g)) for n, g in p.neg_post))


def mirror_spec(s: Specification) -> Specification:
    return Specification(mirror_metamodel(s.metamodel),
                         tuple(mirror_pattern(p) for p in s.patterns))
