"""Triple graphs: a source graph and a target graph related through
correspondence nodes with total anchor maps into each side.

Search problems (monomorphisms, isomorphism) are solved by flattening a
triple into a single typed graph whose anchor maps become edges, so the
commutation constraints come for free.  Constructions that must control
element ids (pushout, pullback, restriction) are computed componentwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional

from .graphs import (EMPTY_GRAPH, Edge, Graph, GraphError, GraphMorphism,
                     Node, TypeGraph, find_monomorphisms, fresh_id)

SIDES = ("source", "corr", "target")


class TypeGraphMismatch(GraphError):
    """Inputs are not typed over the same metamodel."""


class CorrType(NamedTuple):
    name: str
    source_type: Optional[str] = None   # None means any node type
    target_type: Optional[str] = None


class CorrNode(NamedTuple):
    id: str
    type: str
    source: str
    target: str


DEFAULT_CORR = CorrType("rel")


@dataclass(frozen=True)
class MetamodelTriple:
    """Type graphs for both sides plus the declared correspondence types."""

    source_types: TypeGraph
    target_types: TypeGraph
    corr_types: tuple[CorrType, ...] = (DEFAULT_CORR,)

    def __post_init__(self) -> None:
        cts = tuple(sorted(CorrType(*c) for c in self.corr_types)) or (DEFAULT_CORR,)
        object.__setattr__(self, "corr_types", cts)
        names = [c.name for c in cts]
        if len(set(names)) != len(names):
            raise GraphError("duplicate correspondence type names")
        for ct in cts:
            if ct.source_type is not None and ct.source_type not in self.source_types.node_types:
                raise GraphError(f"corr type {ct.name}: unknown source constraint")
            if ct.target_type is not None and ct.target_type not in self.target_types.node_types:
                raise GraphError(f"corr type {ct.name}: unknown target constraint")

    @cached_property
    def corr_type_map(self) -> dict[str, CorrType]:
        return {c.name: c for c in self.corr_types}


@dataclass(frozen=True)
class TripleGraph:
    """Source graph, target graph, and correspondence nodes anchored in both.

    Construction checks only local shape (unique corr ids); anchor totality,
    typing and id disjointness are reported by :func:`validate_triple` so
    that ill-formed documents can be diagnosed rather than rejected blindly.
    """

    source: Graph = EMPTY_GRAPH
    target: Graph = EMPTY_GRAPH
    corr: tuple[CorrNode, ...] = ()

    def __post_init__(self) -> None:
        corr = tuple(sorted(CorrNode(*c) for c in self.corr))
        object.__setattr__(self, "corr", corr)
        ids = [c.id for c in corr]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate correspondence ids")
        shared = self.source.element_ids() & self.target.element_ids()
        if shared:
            raise GraphError(f"source/target ids must be disjoint: {sorted(shared)}")

    @cached_property
    def corr_map(self) -> dict[str, CorrNode]:
        return {c.id: c for c in self.corr}

    @property
    def size(self) -> int:
        return self.source.size + self.target.size + len(self.corr)

    def is_empty(self) -> bool:
        return self.source.is_empty() and self.target.is_empty() and not self.corr

    def well_formed(self) -> bool:
        return all(self.source.has_node(c.source) and self.target.has_node(c.target)
                   for c in self.corr)

    def related_pairs(self) -> set[tuple[str, str]]:
        """(source node, target node) pairs linked by some corr node."""
        return {(c.source, c.target) for c in self.corr}

    def contains(self, other: "TripleGraph") -> bool:
        return (self.source.contains(other.source)
                and self.target.contains(other.target)
                and all(self.corr_map.get(c.id) == c for c in other.corr))

    def subtriple(self, source_nodes: Iterable[str] = (), source_edges: Iterable[str] = (),
                  corr_ids: Iterable[str] = (), target_nodes: Iterable[str] = (),
                  target_edges: Iterable[str] = ()) -> "TripleGraph":
        cids = set(corr_ids)
        return TripleGraph(self.source.subgraph(source_nodes, source_edges),
                           self.target.subgraph(target_nodes, target_edges),
                           tuple(c for c in self.corr if c.id in cids))

    def subtriple_by_ids(self, ids: set[str]) -> "TripleGraph":
        """Subtriple on the given element ids (assumed closed)."""
        return self.subtriple(
            (n.id for n in self.source.nodes if n.id in ids),
            (e.id for e in self.source.edges if e.id in ids),
            (c.id for c in self.corr if c.id in ids),
            (n.id for n in self.target.nodes if n.id in ids),
            (e.id for e in self.target.edges if e.id in ids))

    def element_ids(self) -> set[str]:
        return (self.source.element_ids() | self.target.element_ids()
                | {c.id for c in self.corr})

    def union(self, other: "TripleGraph") -> "TripleGraph":
        corr = dict(self.corr_map)
        for c in other.corr:
            if corr.setdefault(c.id, c) != c:
                raise GraphError(f"conflicting corr node {c.id} in union")
        return TripleGraph(self.source.union(other.source),
                           self.target.union(other.target),
                           tuple(corr.values()))


EMPTY_TRIPLE = TripleGraph()


@dataclass(frozen=True)
class TripleMorphism:
    """Componentwise injective morphism commuting with the anchor maps."""

    domain: TripleGraph
    codomain: TripleGraph
    source_part: GraphMorphism
    target_part: GraphMorphism
    corr_pairs: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "corr_pairs", tuple(sorted(self.corr_pairs)))
        cm = dict(self.corr_pairs)
        if set(cm) != {c.id for c in self.domain.corr} or len(cm) != len(self.domain.corr):
            raise GraphError("corr map is not total on the domain")
        if len(set(cm.values())) != len(cm):
            raise GraphError("corr map is not injective")
        for c in self.domain.corr:
            img = self.codomain.corr_map.get(cm[c.id])
            if img is None:
                raise GraphError(f"corr image {cm[c.id]} missing from codomain")
            if img.type != c.type:
                raise GraphError(f"corr map does not preserve types at {c.id}")
            if (img.source != self.source_part.node_map[c.source]
                    or img.target != self.target_part.node_map[c.target]):
                raise GraphError(f"corr map does not commute with anchors at {c.id}")

    @classmethod
    def identity(cls, t: TripleGraph) -> "TripleMorphism":
        return cls(t, t, GraphMorphism.identity(t.source),
                   GraphMorphism.identity(t.target),
                   tuple((c.id, c.id) for c in t.corr))

    @classmethod
    def inclusion(cls, sub: TripleGraph, sup: TripleGraph) -> "TripleMorphism":
        if not sup.contains(sub):
            raise GraphError("not a subtriple inclusion")
        return cls(sub, sup, GraphMorphism.inclusion(sub.source, sup.source),
                   GraphMorphism.inclusion(sub.target, sup.target),
                   tuple((c.id, c.id) for c in sub.corr))

    @cached_property
    def corr_map(self) -> dict[str, str]:
        return dict(self.corr_pairs)

    def mapping(self) -> dict[str, str]:
        """All element pairs as one dict (component ids are disjoint)."""
        out = dict(self.source_part.node_map)
        out.update(self.source_part.edge_map)
        out.update(self.target_part.node_map)
        out.update(self.target_part.edge_map)
        out.update(self.corr_map)
        return out

    def image_ids(self) -> set[str]:
        return (set(self.source_part.node_map.values())
                | set(self.source_part.edge_map.values())
                | set(self.target_part.node_map.values())
                | set(self.target_part.edge_map.values())
                | set(self.corr_map.values()))

    def image(self) -> TripleGraph:
        return self.codomain.subtriple_by_ids(self.image_ids())

    def is_bijective(self) -> bool:
        return (self.source_part.is_bijective() and self.target_part.is_bijective()
                and len(self.corr_pairs) == len(self.codomain.corr))

    def compose(self, then: "TripleMorphism") -> "TripleMorphism":
        if self.codomain != then.domain:
            raise GraphError("composition mismatch")
        return TripleMorphism(self.domain, then.codomain,
                              self.source_part.compose(then.source_part),
                              self.target_part.compose(then.target_part),
                              tuple((d, then.corr_map[c]) for d, c in self.corr_pairs))


def validate_triple(t: TripleGraph, mm: MetamodelTriple) -> list[str]:
    """All well-typedness violations of ``t`` over ``mm`` (empty list iff ok)."""
    problems = [f"source: {p}" for p in mm.source_types.check(t.source)]
    problems += [f"target: {p}" for p in mm.target_types.check(t.target)]
    st_ids = t.source.element_ids() | t.target.element_ids()
    for c in t.corr:
        ct = mm.corr_type_map.get(c.type)
        if ct is None:
            problems.append(f"corr {c.id}: unknown corr type {c.type}")
            continue
        if not t.source.has_node(c.source):
            problems.append(f"corr {c.id}: dangling cs anchor {c.source}")
        elif ct.source_type is not None and t.source.node_type(c.source) != ct.source_type:
            problems.append(f"corr {c.id}: source anchor violates {ct.name} constraint")
        if not t.target.has_node(c.target):
            problems.append(f"corr {c.id}: dangling ct anchor {c.target}")
        elif ct.target_type is not None and t.target.node_type(c.target) != ct.target_type:
            problems.append(f"corr {c.id}: target anchor violates {ct.name} constraint")
        if c.id in st_ids:
            problems.append(f"corr {c.id}: id collides with a source/target element")
    return problems


def restrict(t: TripleGraph, side: str) -> TripleGraph:
    """Component restriction.

    ``source``/``target`` keep just that graph; ``corr`` keeps the corr nodes
    plus both anchor endpoints (the smallest well-formed triple around them).
    """
    if side == "source":
        return TripleGraph(t.source, EMPTY_GRAPH, ())
    if side == "target":
        return TripleGraph(EMPTY_GRAPH, t.target, ())
    if side == "corr":
        s_nodes = {c.source for c in t.corr}
        t_nodes = {c.target for c in t.corr}
        return TripleGraph(t.source.subgraph(s_nodes, ()),
                           t.target.subgraph(t_nodes, ()), t.corr)
    raise ValueError(f"unknown side {side!r}")


# -- flattening ---------------------------------------------------------------

_CS, _CT = "cs", "ct"


def flatten(t: TripleGraph) -> Graph:
    """Encode a triple as one graph; anchors become cs/ct edges.

    Types and ids are prefixed per component, so monomorphisms of flattened
    graphs are exactly triple morphisms of the originals.
    """
    nodes = [Node("s:" + n.id, "sn:" + n.type) for n in t.source.nodes]
    nodes += [Node("t:" + n.id, "tn:" + n.type) for n in t.target.nodes]
    nodes += [Node("c:" + c.id, "cn:" + c.type) for c in t.corr]
    edges = [Edge("s:" + e.id, "se:" + e.type, "s:" + e.src, "s:" + e.tgt)
             for e in t.source.edges]
    edges += [Edge("t:" + e.id, "te:" + e.type, "t:" + e.src, "t:" + e.tgt)
              for e in t.target.edges]
    for c in t.corr:
        edges.append(Edge("cs:" + c.id, _CS, "c:" + c.id, "s:" + c.source))
        edges.append(Edge("ct:" + c.id, _CT, "c:" + c.id, "t:" + c.target))
    return Graph(tuple(nodes), tuple(edges))


def _unflatten_morphism(domain: TripleGraph, codomain: TripleGraph,
                        flat: GraphMorphism) -> TripleMorphism:
    s_nodes, t_nodes, corr = [], [], []
    for d, c in flat.node_pairs:
        if d.startswith("s:"):
            s_nodes.append((d[2:], c[2:]))
        elif d.startswith("t:"):
            t_nodes.append((d[2:], c[2:]))
        else:
            corr.append((d[2:], c[2:]))
    s_edges = [(d[2:], c[2:]) for d, c in flat.edge_pairs if d.startswith("s:")]
    t_edges = [(d[2:], c[2:]) for d, c in flat.edge_pairs if d.startswith("t:")]
    return TripleMorphism(
        domain, codomain,
        GraphMorphism(domain.source, codomain.source, tuple(s_nodes), tuple(s_edges)),
        GraphMorphism(domain.target, codomain.target, tuple(t_nodes), tuple(t_edges)),
        tuple(corr))


def _flatten_anchor(anchor: Mapping[str, str], t: TripleGraph) -> dict[str, str]:
    flat: dict[str, str] = {}
    s_ids = t.source.element_ids()
    t_ids = t.target.element_ids()
    for k, v in anchor.items():
        if k in s_ids:
            flat["s:" + k] = "s:" + v
        elif k in t_ids:
            flat["t:" + k] = "t:" + v
        elif k in t.corr_map:
            flat["c:" + k] = "c:" + v
        else:
            raise GraphError(f"anchor id {k} not in pattern")
    return flat


def find_triple_monomorphisms(pattern: TripleGraph, host: TripleGraph,
                              anchor: Optional[Mapping[str, str]] = None,
                              limit: Optional[int] = None) -> list[TripleMorphism]:
    """All injective triple morphisms pattern -> host extending ``anchor``."""
    flat_anchor = _flatten_anchor(anchor, pattern) if anchor else None
    flats = find_monomorphisms(flatten(pattern), flatten(host),
                               anchor=flat_anchor, limit=limit)
    return [_unflatten_morphism(pattern, host, f) for f in flats]


def are_triples_isomorphic(t1: TripleGraph, t2: TripleGraph,
                           anchor: Optional[Mapping[str, str]] = None
                           ) -> Optional[TripleMorphism]:
    if (len(t1.source.nodes), len(t1.source.edges), len(t1.corr),
            len(t1.target.nodes), len(t1.target.edges)) != \
       (len(t2.source.nodes), len(t2.source.edges), len(t2.corr),
            len(t2.target.nodes), len(t2.target.edges)):
        return None
    found = find_triple_monomorphisms(t1, t2, anchor=anchor, limit=1)
    return found[0] if found else None


# -- constructions ------------------------------------------------------------

def triple_pushout(left: TripleMorphism, right: TripleMorphism, prefix: str = "b:"
                   ) -> tuple[TripleGraph, TripleMorphism, TripleMorphism]:
    """Componentwise gluing of two triples along a shared apex.

    Ids of ``left.codomain`` are preserved; fresh ids for the other copy are
    derived deterministically with ``prefix``.  Returns (P, A -> P, B -> P).
    """
    if left.domain != right.domain:
        raise GraphError("pushout legs do not share an apex")
    a, b = left.codomain, right.codomain
    from .graphs import pushout as graph_pushout
    ps, a_s, b_s = graph_pushout(left.source_part, right.source_part, prefix)
    pt, a_t, b_t = graph_pushout(left.target_part, right.target_part, prefix)

    glued = {right.corr_map[m]: left.corr_map[m] for m in left.corr_map}
    taken = {c.id for c in a.corr}
    corr = list(a.corr)
    b_corr_to_p: dict[str, str] = {}
    for c in b.corr:
        if c.id in glued:
            b_corr_to_p[c.id] = glued[c.id]
        else:
            cid = fresh_id(c.id, taken, prefix)
            taken.add(cid)
            b_corr_to_p[c.id] = cid
            corr.append(CorrNode(cid, c.type, b_s.node_map[c.source], b_t.node_map[c.target]))
    p = TripleGraph(ps, pt, tuple(corr))
    a_to_p = TripleMorphism(a, p, a_s, a_t, tuple((c.id, c.id) for c in a.corr))
    b_to_p = TripleMorphism(b, p, b_s, b_t, tuple(b_corr_to_p.items()))
    return p, a_to_p, b_to_p


def triple_pullback(left: TripleMorphism, right: TripleMorphism
                    ) -> tuple[TripleGraph, TripleMorphism, TripleMorphism]:
    """Intersection of images of two injective legs; carried by A's ids."""
    if left.codomain != right.codomain:
        raise GraphError("pullback legs do not share a codomain")
    from .graphs import pullback as graph_pullback
    ps, ps_a, ps_b = graph_pullback(left.source_part, right.source_part)
    pt, pt_a, pt_b = graph_pullback(left.target_part, right.target_part)
    r_corr = {v: k for k, v in right.corr_map.items()}
    corr_ids = [c.id for c in left.domain.corr if left.corr_map[c.id] in r_corr]
    corr = tuple(c for c in left.domain.corr if c.id in corr_ids
                 if ps.has_node(c.source) and pt.has_node(c.target))
    p = TripleGraph(ps, pt, corr)
    p_to_a = TripleMorphism.inclusion(p, left.domain)
    p_to_b = TripleMorphism(p, right.domain, ps_b, pt_b,
                            tuple((c.id, r_corr[left.corr_map[c.id]]) for c in corr))
    return p, p_to_a, p_to_b


def glue_over_side(c: TripleGraph, q_embed: TripleMorphism, side: str
                   ) -> tuple[TripleGraph, TripleMorphism]:
    """Directed base construction: keep Q's ``side`` component, C's others.

    For side=source the result is <Q_s, C_c, C_t> (with C's corr and target
    carried over through the embedding); side=target is the mirror image.
    Returns the base triple and its embedding into Q.
    """
    q = q_embed.codomain
    if side == "source":
        corr = tuple(CorrNode(q_embed.corr_map[cn.id], cn.type,
                              q_embed.source_part.node_map[cn.source],
                              q_embed.target_part.node_map[cn.target])
                     for cn in c.corr)
        base = TripleGraph(q.source, q_embed.target_part.image(), corr)
    elif side == "target":
        corr = tuple(CorrNode(q_embed.corr_map[cn.id], cn.type,
                              q_embed.source_part.node_map[cn.source],
                              q_embed.target_part.node_map[cn.target])
                     for cn in c.corr)
        base = TripleGraph(q_embed.source_part.image(), q.target, corr)
    else:
        raise ValueError(f"unknown side {side!r}")
    return base, TripleMorphism.inclusion(base, q)


def mirror(t: TripleGraph) -> TripleGraph:
    """Swap source and target (used by symmetry tests)."""
    return TripleGraph(t.target, t.source,
                       tuple(CorrNode(c.id, c.type, c.target, c.source) for c in t.corr))


def mirror_metamodel(mm: MetamodelTriple) -> MetamodelTriple:
    return MetamodelTriple(mm.target_types, mm.source_types,
                           tuple(CorrType(c.name, c.target_type, c.source_type)
                                 for c in mm.corr_types))
