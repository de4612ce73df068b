"""Static checks over specifications and the Hippocratic probe.

Pattern-level checks (conflict, tautology, contradiction) are purely
syntactic up to isomorphism; language covering is a necessary condition
for full transformability, which itself stays undecided here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .patterns import Specification, check_spec
from .triples import TripleGraph, find_triple_monomorphisms


@dataclass(frozen=True)
class Conflict:
    positive_pattern: str
    n_pattern: str
    witness: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class Coverage:
    covered_node_types: tuple[str, ...]
    uncovered_node_types: tuple[str, ...]
    covered_edge_types: tuple[str, ...]
    uncovered_edge_types: tuple[str, ...]

    @property
    def covering(self) -> bool:
        return not self.uncovered_node_types and not self.uncovered_edge_types


@dataclass(frozen=True)
class AnalysisReport:
    conflicts: tuple[Conflict, ...]
    tautologies: tuple[tuple[str, str], ...]      # (pattern, form)
    contradictions: tuple[str, ...]
    source_coverage: Coverage
    target_coverage: Coverage
    # Properties defined over all models stay undecided; language covering is
    # only the implemented necessary condition.
    undecided: tuple[str, ...] = ("full-forward", "full-backward",
                                  "full-relating", "specification-contradiction")


def find_conflicts(spec: Specification) -> list[Conflict]:
    """Pairs of a positive pattern and an N-pattern whose forbidden graph
    embeds in the positive graph; the compiled rule could never apply."""
    out = []
    for p in spec.positive_patterns():
        for n in spec.n_patterns():
            if n.forbidden.is_empty():
                continue
            found = find_triple_monomorphisms(n.forbidden, p.positive, limit=1)
            if found:
                from .patterns import match_assignment
                out.append(Conflict(p.name, n.name, match_assignment(found[0])))
    return out


def find_tautologies(spec: Specification) -> list[tuple[str, str]]:
    """Patterns that are satisfied by every triple graph.

    Form (i): a negative precondition equal to the positive graph (always
    vacuously or negatively satisfied).  Form (ii): a positive precondition
    equal to the positive graph (always vacuously or positively satisfied).
    Equality is compatibility with the pattern's own embeddings, which for
    id-inclusions collapses to literal equality.
    """
    out = []
    for p in spec.positive_patterns():
        if any(g == p.positive for _, g in p.neg_pre):
            out.append((p.name, "negative-precondition-equals-positive"))
        elif p.pos_pre == p.positive and not p.positive.is_empty():
            out.append((p.name, "positive-precondition-equals-positive"))
    return out


def find_contradictions(spec: Specification) -> list[str]:
    """Patterns that can only be vacuously satisfied: a negative
    postcondition equal to the positive graph."""
    return [p.name for p in spec.patterns
            if p.is_positive_kind()
            and any(g == p.positive for _, g in p.neg_post)]


def _coverage(spec: Specification, side: str) -> Coverage:
    tg = spec.metamodel.source_types if side == "source" else spec.metamodel.target_types
    covered_nodes: set[str] = set()
    covered_edges: set[str] = set()
    for p in spec.positive_patterns():
        g = p.positive.source if side == "source" else p.positive.target
        covered_nodes |= {n.type for n in g.nodes}
        covered_edges |= {e.type for e in g.edges}
    all_nodes = set(tg.node_types)
    all_edges = {e.name for e in tg.edge_types}
    return Coverage(tuple(sorted(covered_nodes & all_nodes)),
                    tuple(sorted(all_nodes - covered_nodes)),
                    tuple(sorted(covered_edges & all_edges)),
                    tuple(sorted(all_edges - covered_edges)))


def language_covering(spec: Specification) -> tuple[Coverage, Coverage]:
    """Node/edge types reached by some positive pattern, per side, computed
    on the user's initial specification."""
    return _coverage(spec, "source"), _coverage(spec, "target")


@dataclass(frozen=True)
class ProbeResult:
    status: str                      # "pass" | "fail" | "not-applicable"
    offending_rule: Optional[str] = None
    offending_match: Optional[tuple[tuple[str, str], ...]] = None


def hippocratic_probe(spec: Specification, host: TripleGraph,
                      enable_np: bool = True) -> ProbeResult:
    """If the host satisfies the specification, no compiled rule (either
    direction) may be applicable on it; returns the offender otherwise."""
    from .engine import find_applicable
    from .rules import generate_rules
    if not check_spec(host, spec).satisfied:
        return ProbeResult("not-applicable")
    for direction in ("forward", "backward"):
        for rule in generate_rules(spec, direction, enable_np=enable_np):
            for m in find_applicable(rule, host):
                if m.blocked_by is None:
                    return ProbeResult("fail", rule.name, m.assignment)
    return ProbeResult("pass")


def analyze(spec: Specification) -> AnalysisReport:
    src_cov, tgt_cov = language_covering(spec)
    return AnalysisReport(tuple(find_conflicts(spec)),
                          tuple(find_tautologies(spec)),
                          tuple(find_contradictions(spec)),
                          src_cov, tgt_cov)
