"""YAML document formats for specifications, models, triples, rules and
reports, with stable round-trip serialization.

Graphs encode as explicit node/edge/corr listings; morphisms are implied by
id sharing (a pattern's precondition uses the positive graph's ids, every
negative condition repeats the positive graph's elements verbatim).
"""

from __future__ import annotations

from typing import Any, Optional

import yaml

from .analysis import AnalysisReport
from .graphs import Edge, EdgeType, Graph, GraphError, Node, TypeGraph
from .patterns import (DirectionReport, MatchReport, Pattern,
                       SatisfactionReport, Specification)
from .rules import TGGRule
from .triples import (CorrNode, CorrType, MetamodelTriple, TripleGraph,
                      validate_triple)


class DocumentError(Exception):
    """Syntax or semantic problem in a document, with location context."""


def _require(cond: bool, where: str, message: str) -> None:
    if not cond:
        raise DocumentError(f"{where}: {message}")


# -- graphs -------------------------------------------------------------------

def graph_to_doc(g: Graph) -> dict:
    doc: dict[str, Any] = {}
    if g.nodes:
        doc["nodes"] = {n.id: n.type for n in g.nodes}
    if g.edges:
        doc["edges"] = [{"id": e.id, "type": e.type, "from": e.src, "to": e.tgt}
                        for e in g.edges]
    return doc


def graph_from_doc(doc: Optional[dict], where: str = "graph") -> Graph:
    doc = doc or {}
    _require(isinstance(doc, dict), where, "expected a mapping")
    nodes = doc.get("nodes") or {}
    _require(isinstance(nodes, dict), where, "nodes must map id to type")
    edges = []
    for i, e in enumerate(doc.get("edges") or []):
        for key in ("id", "type", "from", "to"):
            _require(key in e, f"{where}.edges[{i}]", f"missing {key}")
        edges.append(Edge(str(e["id"]), str(e["type"]), str(e["from"]), str(e["to"])))
    try:
        return Graph(tuple(Node(str(i), str(t)) for i, t in nodes.items()),
                     tuple(edges))
    except GraphError as exc:
        raise DocumentError(f"{where}: {exc}") from exc


def triple_to_doc(t: TripleGraph) -> dict:
    doc: dict[str, Any] = {}
    if not t.source.is_empty():
        doc["source"] = graph_to_doc(t.source)
    if not t.target.is_empty():
        doc["target"] = graph_to_doc(t.target)
    if t.corr:
        doc["corr"] = [{"id": c.id, "type": c.type,
                        "source": c.source, "target": c.target} for c in t.corr]
    return doc


def triple_from_doc(doc: Optional[dict], where: str = "triple") -> TripleGraph:
    doc = doc or {}
    _require(isinstance(doc, dict), where, "expected a mapping")
    corr = []
    for i, c in enumerate(doc.get("corr") or []):
        for key in ("id", "source", "target"):
            _require(key in c, f"{where}.corr[{i}]", f"missing {key}")
        corr.append(CorrNode(str(c["id"]), str(c.get("type", "rel")),
                             str(c["source"]), str(c["target"])))
    try:
        return TripleGraph(graph_from_doc(doc.get("source"), f"{where}.source"),
                           graph_from_doc(doc.get("target"), f"{where}.target"),
                           tuple(corr))
    except GraphError as exc:
        raise DocumentError(f"{where}: {exc}") from exc


# -- metamodel ----------------------------------------------------------------

def _type_graph_from_doc(doc: Optional[dict], where: str) -> TypeGraph:
    doc = doc or {}
    nodes = doc.get("nodes") or []
    _require(isinstance(nodes, list), where, "nodes must be a list of type names")
    edges = []
    for i, e in enumerate(doc.get("edges") or []):
        for key in ("name", "from", "to"):
            _require(key in e, f"{where}.edges[{i}]", f"missing {key}")
        edges.append(EdgeType(str(e["name"]), str(e["from"]), str(e["to"])))
    try:
        return TypeGraph(frozenset(str(n) for n in nodes), tuple(edges))
    except GraphError as exc:
        raise DocumentError(f"{where}: {exc}") from exc


def _type_graph_to_doc(tg: TypeGraph) -> dict:
    doc: dict[str, Any] = {"nodes": sorted(tg.node_types)}
    if tg.edge_types:
        doc["edges"] = [{"name": e.name, "from": e.src, "to": e.tgt}
                        for e in tg.edge_types]
    return doc


def metamodel_from_doc(doc: Optional[dict], where: str = "metamodel") -> MetamodelTriple:
    doc = doc or {}
    _require(isinstance(doc, dict), where, "expected a mapping")
    corr = []
    for i, c in enumerate(doc.get("corr") or []):
        _require("name" in c, f"{where}.corr[{i}]", "missing name")
        corr.append(CorrType(str(c["name"]),
                             c.get("source") and str(c["source"]),
                             c.get("target") and str(c["target"])))
    try:
        return MetamodelTriple(_type_graph_from_doc(doc.get("source"), f"{where}.source"),
                               _type_graph_from_doc(doc.get("target"), f"{where}.target"),
                               tuple(corr) or (CorrType("rel"),))
    except GraphError as exc:
        raise DocumentError(f"{where}: {exc}") from exc


def metamodel_to_doc(mm: MetamodelTriple) -> dict:
    doc = {"source": _type_graph_to_doc(mm.source_types),
           "target": _type_graph_to_doc(mm.target_types),
           "corr": []}
    for c in mm.corr_types:
        entry: dict[str, Any] = {"name": c.name}
        if c.source_type:
            entry["source"] = c.source_type
        if c.target_type:
            entry["target"] = c.target_type
        doc["corr"].append(entry)
    return doc


# -- specifications -----------------------------------------------------------

def _conditions_from_doc(items, where: str) -> tuple[tuple[str, TripleGraph], ...]:
    out = []
    for i, item in enumerate(items or []):
        _require(isinstance(item, dict) and "name" in item and "graph" in item,
                 f"{where}[{i}]", "expected {name, graph}")
        out.append((str(item["name"]),
                    triple_from_doc(item["graph"], f"{where}[{i}].graph")))
    return tuple(out)


def _conditions_to_doc(conds) -> list:
    return [{"name": n, "graph": triple_to_doc(g)} for n, g in conds]


def pattern_from_doc(doc: dict, where: str) -> Pattern:
    _require(isinstance(doc, dict) and "name" in doc, where, "pattern needs a name")
    name = str(doc["name"])
    where = f"pattern {name}"
    kind = str(doc.get("kind", "S"))
    if kind == "N":
        _require("forbid" in doc, where, "N-patterns declare a single `forbid` graph")
        for key in ("positive", "pos_pre", "neg_pre", "neg_post"):
            _require(key not in doc, where, f"N-patterns carry no {key}")
        forbidden = triple_from_doc(doc["forbid"], f"{where}.forbid")
        return Pattern(name, "N", neg_post=(("forbid", forbidden),))
    _require("neg_post" not in doc and "forbid" not in doc, where,
             "only N-patterns may declare negative post-conditions in an "
             "initial specification; express the constraint as an N-pattern")
    positive = triple_from_doc(doc.get("positive"), f"{where}.positive")
    pos_pre = triple_from_doc(doc.get("pos_pre"), f"{where}.pos_pre")
    neg_pre = _conditions_from_doc(doc.get("neg_pre"), f"{where}.neg_pre")
    try:
        return Pattern(name, kind, pos_pre, positive, neg_pre, ())
    except GraphError as exc:
        raise DocumentError(f"{where}: {exc}") from exc


def pattern_to_doc(p: Pattern) -> dict:
    if p.kind == "N":
        return {"name": p.name, "kind": "N", "forbid": triple_to_doc(p.forbidden)}
    doc: dict[str, Any] = {"name": p.name, "kind": p.kind,
                           "positive": triple_to_doc(p.positive)}
    if not p.pos_pre.is_empty():
        doc["pos_pre"] = triple_to_doc(p.pos_pre)
    if p.neg_pre:
        doc["neg_pre"] = _conditions_to_doc(p.neg_pre)
    return doc


def parse_spec(text: str) -> Specification:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DocumentError(f"specification: invalid YAML: {exc}") from exc
    _require(isinstance(doc, dict), "specification", "expected a mapping")
    mm = metamodel_from_doc(doc.get("metamodel"))
    patterns = []
    for i, p in enumerate(doc.get("patterns") or []):
        patterns.append(pattern_from_doc(p, f"patterns[{i}]"))
    try:
        spec = Specification(mm, tuple(patterns))
    except GraphError as exc:
        raise DocumentError(f"specification: {exc}") from exc
    problems = spec.validate(initial=True)
    if problems:
        raise DocumentError("specification: " + "; ".join(problems))
    return spec


def serialize_spec(spec: Specification) -> str:
    doc = {"metamodel": metamodel_to_doc(spec.metamodel),
           "patterns": [pattern_to_doc(p) for p in spec.patterns]}
    return yaml.safe_dump(doc, sort_keys=True)


def parse_model(text: str) -> Graph:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DocumentError(f"model: invalid YAML: {exc}") from exc
    return graph_from_doc(doc, "model")


def serialize_model(model: Graph) -> str:
    return yaml.safe_dump(graph_to_doc(model), sort_keys=True)


def parse_triple(text: str, mm: Optional[MetamodelTriple] = None) -> TripleGraph:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DocumentError(f"triple: invalid YAML: {exc}") from exc
    t = triple_from_doc(doc, "triple")
    if mm is not None:
        problems = validate_triple(t, mm)
        if problems:
            raise DocumentError("triple: " + "; ".join(problems))
    return t


def serialize_triple(t: TripleGraph) -> str:
    return yaml.safe_dump(triple_to_doc(t), sort_keys=True)


# -- rules ----------------------------------------------------------------

def rule_to_doc(r: TGGRule) -> dict:
    return {"name": r.name, "direction": r.direction, "provenance": r.provenance,
            "lhs": triple_to_doc(r.lhs), "rhs": triple_to_doc(r.rhs),
            "nacs": _conditions_to_doc(r.nacs),
            "posts": _conditions_to_doc(r.posts)}


def rule_from_doc(doc: dict, where: str) -> TGGRule:
    for key in ("name", "direction", "lhs", "rhs"):
        _require(key in doc, where, f"missing {key}")
    try:
        return TGGRule(str(doc["name"]),
                       triple_from_doc(doc["lhs"], f"{where}.lhs"),
                       triple_from_doc(doc["rhs"], f"{where}.rhs"),
                       _conditions_from_doc(doc.get("nacs"), f"{where}.nacs"),
                       _conditions_from_doc(doc.get("posts"), f"{where}.posts"),
                       str(doc["direction"]), str(doc.get("provenance", "")))
    except GraphError as exc:
        raise DocumentError(f"{where}: {exc}") from exc


def serialize_rules(rules: list[TGGRule]) -> str:
    return yaml.safe_dump({"rules": [rule_to_doc(r) for r in rules]}, sort_keys=True)


def parse_rules(text: str) -> list[TGGRule]:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DocumentError(f"rules: invalid YAML: {exc}") from exc
    _require(isinstance(doc, dict) and isinstance(doc.get("rules"), list),
             "rules", "expected {rules: [...]}")
    return [rule_from_doc(r, f"rules[{i}]") for i, r in enumerate(doc["rules"])]


# -- reports --------------------------------------------------------------

def report_to_doc(report: SatisfactionReport) -> dict:
    entries = []
    for e in report.entries:
        entries.append({
            "pattern": e.pattern, "direction": e.direction, "verdict": e.verdict,
            "matches": [{"assignment": dict(m.assignment),
                         "classification": m.classification,
                         **({"detail": m.detail} if m.detail else {})}
                        for m in e.matches]})
    return {"satisfied": report.satisfied, "entries": entries}


def report_from_doc(doc: dict) -> SatisfactionReport:
    entries = []
    for e in doc.get("entries") or []:
        matches = tuple(MatchReport(tuple(sorted((str(k), str(v))
                                                 for k, v in m["assignment"].items())),
                                    str(m["classification"]), str(m.get("detail", "")))
                        for m in e.get("matches") or [])
        entries.append(DirectionReport(str(e["pattern"]), str(e["direction"]), matches))
    return SatisfactionReport(tuple(entries))


def serialize_report(report: SatisfactionReport) -> str:
    return yaml.safe_dump(report_to_doc(report), sort_keys=True)


def parse_report(text: str) -> SatisfactionReport:
    return report_from_doc(yaml.safe_load(text))


def annotated_to_doc(annotated) -> dict:
    """Deduction output: derived patterns with dependencies and provenance."""
    out = []
    for a in annotated:
        entry = pattern_to_doc(a.pattern)
        if a.pattern.neg_post:
            entry["neg_post"] = _conditions_to_doc(a.pattern.neg_post)
        if a.deps:
            entry["deps"] = [{"name": d.name,
                              "graph": triple_to_doc(d.embed.domain),
                              "mapping": dict(sorted(d.embed.mapping().items()))}
                             for d in a.deps]
        if a.parents:
            entry["parents"] = list(a.parents)
        if a.provenance:
            entry["provenance"] = list(a.provenance)
        out.append(entry)
    return {"patterns": out}


def serialize_annotated(annotated) -> str:
    return yaml.safe_dump(annotated_to_doc(annotated), sort_keys=True)


def analysis_to_doc(report: AnalysisReport) -> dict:
    return {
        "conflicts": [{"positive_pattern": c.positive_pattern,
                       "n_pattern": c.n_pattern,
                       "witness": dict(c.witness)} for c in report.conflicts],
        "tautologies": [{"pattern": n, "form": f} for n, f in report.tautologies],
        "contradictions": list(report.contradictions),
        "language_covering": {
            side: {"covered_node_types": list(cov.covered_node_types),
                   "uncovered_node_types": list(cov.uncovered_node_types),
                   "covered_edge_types": list(cov.covered_edge_types),
                   "uncovered_edge_types": list(cov.uncovered_edge_types),
                   "covering": cov.covering}
            for side, cov in (("source", report.source_coverage),
                              ("target", report.target_coverage))},
        "undecided": list(report.undecided)}


def serialize_analysis(report: AnalysisReport) -> str:
    return yaml.safe_dump(analysis_to_doc(report), sort_keys=True)
