"""Compilation of annotated patterns into operational rewrite rules.

A forward rule takes the directed base of a pattern as its left-hand side
and the full positive graph as its right-hand side, so applying it extends
a base occurrence to a complete occurrence.  Negative application
conditions come from three sources: the right-hand side itself (so each
occurrence is enforced once), the surviving directed negative
preconditions, and the left extensions of the pattern's dependencies.
"""

from __future__ import annotations

from dataclasses import dataclass
from .deduction import AnnotatedPattern, run_deduction_pipeline
from .graphs import GraphError
from .patterns import DIRECTIONS, Specification, directed_base
from .triples import (TripleGraph, TripleMorphism, are_triples_isomorphic,
                      triple_pullback, triple_pushout)


class RuleError(GraphError):
    """Rule compilation problem."""


@dataclass(frozen=True)
class TGGRule:
    """Non-deleting triple rewrite rule with NACs and postconditions.

    lhs is a subtriple of rhs; every NAC extends lhs and every
    postcondition extends rhs, all by id-inclusion.
    """

    name: str
    lhs: TripleGraph
    rhs: TripleGraph
    nacs: tuple[tuple[str, TripleGraph], ...]
    posts: tuple[tuple[str, TripleGraph], ...]
    direction: str
    provenance: str

    def __post_init__(self) -> None:
        if not self.rhs.contains(self.lhs):
            raise RuleError(f"{self.name}: left side is not included in the right side")
        for n, g in self.nacs:
            if not g.contains(self.lhs):
                raise RuleError(f"{self.name}: NAC {n} does not extend the left side")
        for n, g in self.posts:
            if not g.contains(self.rhs):
                raise RuleError(f"{self.name}: postcondition {n} does not extend "
                                "the right side")
        if not any(_same_extension(g, self.rhs, self.lhs) for _, g in self.nacs):
            raise RuleError(f"{self.name}: missing the RHS NAC")


def _same_extension(a: TripleGraph, b: TripleGraph, over: TripleGraph) -> bool:
    anchor = {i: i for i in over.element_ids()}
    return are_triples_isomorphic(a, b, anchor=anchor) is not None


def left_extension(lhs: TripleGraph, rhs: TripleGraph, dep: TripleMorphism
                   ) -> TripleGraph:
    """Turn a dependency on the right-hand side into a NAC on the left.

    The part of the dependency already visible in lhs is identified
    (pullback); the remainder is glued onto lhs (pushout).  The result
    extends lhs by id-inclusion.
    """
    incl = TripleMorphism.inclusion(lhs, rhs)
    _, b_to_dep_dom, b_to_lhs = triple_pullback(dep, incl)
    extended, _, _ = triple_pushout(b_to_lhs, b_to_dep_dom)
    return extended


def derive_rule(annotated: AnnotatedPattern, direction: str) -> TGGRule:
    """Compile one annotated pattern into a rule for the given direction."""
    p = annotated.pattern
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    if p.positive.is_empty():
        raise RuleError(f"{p.name}: cannot derive a rule from an empty positive graph")

    base = directed_base(p, direction)
    lhs, rhs = base.base, p.positive

    nacs: list[tuple[str, TripleGraph]] = [("rhs", rhs)]
    for neg in base.negatives:
        if neg.excluded:
            continue
        nacs.append((f"pre:{neg.name}", neg.graph))
    for dep in annotated.deps:
        nacs.append((f"dep:{dep.name}", left_extension(lhs, rhs, dep.embed)))

    deduped: list[tuple[str, TripleGraph]] = []
    for name, g in nacs:
        if any(_same_extension(g, h, lhs) for _, h in deduped):
            continue
        deduped.append((name, g))

    return TGGRule(f"{p.name}:{direction}", lhs, rhs, tuple(deduped),
                   tuple(p.neg_post), direction, p.name)


def generate_rules(spec: Specification, direction: str,
                   enable_np: bool = True) -> list[TGGRule]:
    """Run the deduction pipeline and compile a rule per resulting pattern."""
    annotated = run_deduction_pipeline(spec, enable_np=enable_np)
    return [derive_rule(a, direction) for a in annotated]
