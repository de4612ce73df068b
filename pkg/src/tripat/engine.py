"""Non-deleting triple-graph rewriting, saturation, and the verified
forward/backward transformation functions.

Applying a rule glues a fresh copy of its right-hand-side remainder onto
the host at a match of the left-hand side.  Saturation repeats until no
rule has an unblocked match; since every rule carries its right-hand side
as a NAC and never deletes, this terminates.  A transformation saturates
from a one-sided triple and then verifies the result against the
declarative semantics; failure is a domain error, not a crash.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .graphs import Graph, GraphError
from .patterns import (SatisfactionReport, Specification, check_spec,
                       match_assignment)
from .rules import TGGRule, generate_rules
from .triples import (EMPTY_GRAPH, TripleGraph, TripleMorphism,
                      find_triple_monomorphisms)


class EngineError(GraphError):
    """Internal engine failure (should not happen on valid inputs)."""


class InputTypingError(GraphError):
    """The input model is not typed over the specification metamodel."""


@dataclass
class TransformError(GraphError):
    """Saturation finished but the result does not satisfy the specification:
    the source lies outside the transformable domain, or the specification
    lacks the positive patterns needed to reach it."""

    message: str
    violating_patterns: tuple[str, ...] = ()
    result: Optional[TripleGraph] = None

    def __str__(self) -> str:
        extra = ""
        if self.violating_patterns:
            extra = " (violated: " + ", ".join(self.violating_patterns) + ")"
        return self.message + extra


class PostConditionFired(GraphError):
    def __init__(self, rule: str, condition: str):
        super().__init__(f"postcondition {condition} of rule {rule} would be "
                         "violated by this application")
        self.rule = rule
        self.condition = condition


@dataclass(frozen=True)
class RuleMatch:
    rule: str
    assignment: tuple[tuple[str, str], ...]
    blocked_by: Optional[str] = None


@dataclass(frozen=True)
class TraceStep:
    rule: str
    assignment: tuple[tuple[str, str], ...]
    created: tuple[str, ...]


@dataclass
class Trace:
    steps: list[TraceStep] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def applications(self) -> int:
        return len(self.steps)


def _matches(rule: TGGRule, host: TripleGraph) -> list[TripleMorphism]:
    return find_triple_monomorphisms(rule.lhs, host)


def _blocking_nac(rule: TGGRule, host: TripleGraph,
                  match: TripleMorphism) -> Optional[str]:
    anchor = dict(match_assignment(match))
    for name, nac in rule.nacs:
        if find_triple_monomorphisms(nac, host, anchor=anchor, limit=1):
            return name
    return None


def find_applicable(rule: TGGRule, host: TripleGraph) -> list[RuleMatch]:
    """Every match of the rule's left side, each flagged with the NAC that
    blocks it (if any).  Unblocked entries are the applicable ones."""
    out = []
    for m in _matches(rule, host):
        out.append(RuleMatch(rule.name, match_assignment(m),
                             _blocking_nac(rule, host, m)))
    return out


def _match_from_assignment(rule: TGGRule, host: TripleGraph,
                           assignment: Iterable[tuple[str, str]]) -> TripleMorphism:
    found = find_triple_monomorphisms(rule.lhs, host, anchor=dict(assignment))
    if not found:
        raise EngineError(f"stale match for rule {rule.name}")
    return found[0]


def apply_rule(rule: TGGRule, match: TripleMorphism, host: TripleGraph,
               prefix: str = "n:") -> tuple[TripleGraph, tuple[str, ...]]:
    """Glue the right-hand-side remainder onto the host at ``match``.

    The comatch is checked against the rule's postconditions; a hit rejects
    the application (the host is returned unchanged via the exception).
    """
    if _blocking_nac(rule, host, match) is not None:
        raise EngineError(f"match for {rule.name} is NAC-blocked")
    from .triples import TripleMorphism as TM, triple_pushout
    lhs_into_rhs = TM.inclusion(rule.lhs, rule.rhs)
    new_host, _, comatch = triple_pushout(match, lhs_into_rhs, prefix=prefix)
    created = tuple(sorted(new_host.element_ids() - host.element_ids()))

    anchor = dict(match_assignment(comatch))
    for name, post in rule.posts:
        if find_triple_monomorphisms(post, new_host, anchor=anchor, limit=1):
            raise PostConditionFired(rule.name, name)
    return new_host, created


def saturate(rules: list[TGGRule], start: TripleGraph,
             scheduler: str = "canonical", seed: Optional[int] = None,
             safety_cap: int = 10_000) -> tuple[TripleGraph, Trace]:
    """Apply rules until no unblocked match remains.

    The canonical scheduler always picks the first applicable (rule, match)
    in (rule name, match) order; the seeded random scheduler exists for
    confluence testing.  Matches rejected by a postcondition are recorded
    as diagnostics and skipped.
    """
    rng = random.Random(seed) if scheduler == "random" else None
    host = start
    trace = Trace()
    rejected: set[tuple[str, tuple]] = set()
    step = 0
    while True:
        candidates: list[tuple[TGGRule, TripleMorphism]] = []
        for rule in sorted(rules, key=lambda r: r.name):
            for m in _matches(rule, host):
                if _blocking_nac(rule, host, m) is None:
                    candidates.append((rule, m))
        if rng is not None:
            rng.shuffle(candidates)
        progressed = False
        for rule, m in candidates:
            key = (rule.name, match_assignment(m))
            if key in rejected:
                continue
            try:
                host, created = apply_rule(rule, m, host, prefix=f"n{step}:")
            except PostConditionFired as fired:
                rejected.add(key)
                trace.diagnostics.append(str(fired))
                continue
            trace.steps.append(TraceStep(rule.name, match_assignment(m), created))
            step += 1
            progressed = True
            break
        if not progressed:
            return host, trace
        if step > safety_cap:
            raise EngineError("saturation exceeded the safety cap; "
                              "rule set does not terminate as expected")


@dataclass
class TransformResult:
    triple: TripleGraph
    trace: Trace
    report: SatisfactionReport
    rules: list[TGGRule]


def transform(spec: Specification, model: Graph, direction: str,
              enable_np: bool = True, scheduler: str = "canonical",
              seed: Optional[int] = None) -> TransformResult:
    """Compile rules for one direction, saturate from the one-sided triple,
    and verify the result.

    Verification is mandatory on every run: the result must satisfy the
    specification and the input side must come back untouched.
    """
    if direction == "forward":
        typing_problems = spec.metamodel.source_types.check(model)
        start = TripleGraph(model, EMPTY_GRAPH, ())
    elif direction == "backward":
        typing_problems = spec.metamodel.target_types.check(model)
        start = TripleGraph(EMPTY_GRAPH, model, ())
    else:
        raise ValueError(f"unknown direction {direction!r}")
    if typing_problems:
        raise InputTypingError("input model is not typed over the metamodel: "
                               + "; ".join(typing_problems))

    rules = generate_rules(spec, direction, enable_np=enable_np)
    final, trace = saturate(rules, start, scheduler=scheduler, seed=seed)

    report = check_spec(final, spec)
    if not report.satisfied:
        raise TransformError(
            "source outside domain or specification not FIP/BIP",
            tuple(report.violations()), final)

    input_side = final.source if direction == "forward" else final.target
    if input_side != model:
        raise EngineError("transformation modified the input side")
    return TransformResult(final, trace, report, rules)


def replay(rules: list[TGGRule], start: TripleGraph, trace: Trace) -> TripleGraph:
    """Re-run a recorded trace from the start triple (testing aid)."""
    by_name = {r.name: r for r in rules}
    host = start
    for i, s in enumerate(trace.steps):
        rule = by_name[s.rule]
        m = _match_from_assignment(rule, host, s.assignment)
        host, _ = apply_rule(rule, m, host, prefix=f"n{i}:")
    return host
