"""Typed graphs, injective morphism search, isomorphism, pushout and pullback.

Everything downstream (triple graphs, patterns, rules, the engine) is built
on the small toolkit in this module.  Values are immutable after
construction and all operations are pure and deterministic: equal inputs
give identical outputs, and candidate enumeration always proceeds in
ascending (type name, id) order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional


class GraphError(Exception):
    """Structural problem in a graph, morphism or construction."""


class Node(NamedTuple):
    id: str
    type: str


class Edge(NamedTuple):
    id: str
    type: str
    src: str
    tgt: str


class EdgeType(NamedTuple):
    name: str
    src: str
    tgt: str


@dataclass(frozen=True)
class TypeGraph:
    """Node type names plus edge type declarations with typed endpoints."""

    node_types: frozenset[str]
    edge_types: tuple[EdgeType, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "node_types", frozenset(self.node_types))
        ets = tuple(sorted(EdgeType(*e) for e in self.edge_types))
        object.__setattr__(self, "edge_types", ets)
        names = [e.name for e in ets]
        if len(set(names)) != len(names):
            raise GraphError("duplicate edge type names")
        for et in ets:
            if et.src not in self.node_types or et.tgt not in self.node_types:
                raise GraphError(f"edge type {et.name} references undeclared node type")

    @cached_property
    def edge_type_map(self) -> dict[str, EdgeType]:
        return {e.name: e for e in self.edge_types}

    def check(self, graph: "Graph") -> list[str]:
        """Typing violations of ``graph`` relative to this type graph."""
        problems = []
        for n in graph.nodes:
            if n.type not in self.node_types:
                problems.append(f"node {n.id}: unknown node type {n.type}")
        for e in graph.edges:
            et = self.edge_type_map.get(e.type)
            if et is None:
                problems.append(f"edge {e.id}: unknown edge type {e.type}")
                continue
            if graph.node_type(e.src) != et.src or graph.node_type(e.tgt) != et.tgt:
                problems.append(f"edge {e.id}: endpoint types do not match {e.type}")
        return problems


@dataclass(frozen=True)
class Graph:
    """A finite graph with typed nodes and typed directed edges.

    Node and edge ids share one namespace and must be unique.  The node and
    edge tuples are kept sorted so that structurally equal graphs compare
    equal.
    """

    nodes: tuple[Node, ...] = ()
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        nodes = tuple(sorted(Node(*n) for n in self.nodes))
        edges = tuple(sorted(Edge(*e) for e in self.edges))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        ids = [n.id for n in nodes] + [e.id for e in edges]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate element ids")
        node_ids = {n.id for n in nodes}
        for e in edges:
            if e.src not in node_ids or e.tgt not in node_ids:
                raise GraphError(f"edge {e.id} has a dangling endpoint")

    @classmethod
    def build(cls, nodes: Mapping[str, str] | Iterable[tuple[str, str]] = (),
              edges: Iterable[tuple[str, str, str, str]] = ()) -> "Graph":
        if isinstance(nodes, Mapping):
            nodes = nodes.items()
        return cls(tuple(Node(i, t) for i, t in nodes),
                   tuple(Edge(*e) for e in edges))

    @cached_property
    def node_map(self) -> dict[str, Node]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    def node_type(self, node_id: str) -> str:
        return self.node_map[node_id].type

    def has_node(self, node_id: str) -> bool:
        return node_id in self.node_map

    @property
    def size(self) -> int:
        return len(self.nodes) + len(self.edges)

    def is_empty(self) -> bool:
        return not self.nodes and not self.edges

    def element_ids(self) -> set[str]:
        return {n.id for n in self.nodes} | {e.id for e in self.edges}

    def subgraph(self, node_ids: Iterable[str], edge_ids: Iterable[str]) -> "Graph":
        nids, eids = set(node_ids), set(edge_ids)
        return Graph(tuple(n for n in self.nodes if n.id in nids),
                     tuple(e for e in self.edges if e.id in eids))

    def contains(self, other: "Graph") -> bool:
        """True if ``other`` is literally a subgraph (same ids, types, endpoints)."""
        return (all(self.node_map.get(n.id) == n for n in other.nodes)
                and all(self.edge_map.get(e.id) == e for e in other.edges))

    def union(self, other: "Graph") -> "Graph":
        """Union of two id-compatible graphs (overlapping ids must agree)."""
        nodes = dict(self.node_map)
        for n in other.nodes:
            if nodes.setdefault(n.id, n) != n:
                raise GraphError(f"conflicting node {n.id} in union")
        edges = dict(self.edge_map)
        for e in other.edges:
            if edges.setdefault(e.id, e) != e:
                raise GraphError(f"conflicting edge {e.id} in union")
        return Graph(tuple(nodes.values()), tuple(edges.values()))


EMPTY_GRAPH = Graph()


@dataclass(frozen=True)
class GraphMorphism:
    """An injective, type- and structure-preserving graph morphism.

    Maps are stored as sorted tuples of (domain id, codomain id) pairs;
    validity is checked on construction.
    """

    domain: Graph
    codomain: Graph
    node_pairs: tuple[tuple[str, str], ...]
    edge_pairs: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "node_pairs", tuple(sorted(self.node_pairs)))
        object.__setattr__(self, "edge_pairs", tuple(sorted(self.edge_pairs)))
        nm, em = dict(self.node_pairs), dict(self.edge_pairs)
        if len(nm) != len(self.domain.nodes) or set(nm) != {n.id for n in self.domain.nodes}:
            raise GraphError("node map is not total on the domain")
        if len(em) != len(self.domain.edges) or set(em) != {e.id for e in self.domain.edges}:
            raise GraphError("edge map is not total on the domain")
        if len(set(nm.values())) != len(nm) or len(set(em.values())) != len(em):
            raise GraphError("morphism is not injective")
        for d, c in nm.items():
            if not self.codomain.has_node(c):
                raise GraphError(f"node image {c} missing from codomain")
            if self.domain.node_type(d) != self.codomain.node_type(c):
                raise GraphError(f"node map does not preserve types at {d}")
        for d, c in em.items():
            de = self.domain.edge_map[d]
            ce = self.codomain.edge_map.get(c)
            if ce is None:
                raise GraphError(f"edge image {c} missing from codomain")
            if de.type != ce.type or nm[de.src] != ce.src or nm[de.tgt] != ce.tgt:
                raise GraphError(f"edge map does not commute at {d}")

    @classmethod
    def identity(cls, graph: Graph) -> "GraphMorphism":
        return cls(graph, graph,
                   tuple((n.id, n.id) for n in graph.nodes),
                   tuple((e.id, e.id) for e in graph.edges))

    @classmethod
    def inclusion(cls, sub: Graph, sup: Graph) -> "GraphMorphism":
        if not sup.contains(sub):
            raise GraphError("not a subgraph inclusion")
        return cls(sub, sup,
                   tuple((n.id, n.id) for n in sub.nodes),
                   tuple((e.id, e.id) for e in sub.edges))

    @cached_property
    def node_map(self) -> dict[str, str]:
        return dict(self.node_pairs)

    @cached_property
    def edge_map(self) -> dict[str, str]:
        return dict(self.edge_pairs)

    def image(self) -> Graph:
        return self.codomain.subgraph(self.node_map.values(), self.edge_map.values())

    def is_bijective(self) -> bool:
        return (len(self.domain.nodes) == len(self.codomain.nodes)
                and len(self.domain.edges) == len(self.codomain.edges))

    def compose(self, then: "GraphMorphism") -> "GraphMorphism":
        """self followed by ``then`` (domain(self) -> codomain(then))."""
        if self.codomain != then.domain:
            raise GraphError("composition mismatch")
        return GraphMorphism(
            self.domain, then.codomain,
            tuple((d, then.node_map[c]) for d, c in self.node_pairs),
            tuple((d, then.edge_map[c]) for d, c in self.edge_pairs))


def _edge_candidates(pattern: Graph, host: Graph, pe: Edge,
                     node_map: dict[str, str]) -> list[str]:
    src, tgt = node_map[pe.src], node_map[pe.tgt]
    return [he.id for he in host.edges
            if he.type == pe.type and he.src == src and he.tgt == tgt]


def find_monomorphisms(pattern: Graph, host: Graph,
                       anchor: Optional[Mapping[str, str]] = None,
                       limit: Optional[int] = None) -> list[GraphMorphism]:
    """All injective morphisms pattern -> host extending ``anchor``.

    ``anchor`` is a partial map from pattern element ids (nodes or edges) to
    host element ids.  Results come in a canonical order determined by
    exploring candidates ascending by (type, id).
    """
    anchor = dict(anchor or {})
    node_ids = {n.id for n in pattern.nodes}
    edge_ids = {e.id for e in pattern.edges}
    node_anchor = {k: v for k, v in anchor.items() if k in node_ids}
    edge_anchor = {k: v for k, v in anchor.items() if k in edge_ids}
    if len(node_anchor) + len(edge_anchor) != len(anchor):
        raise GraphError("anchor references ids outside the pattern")

    # Anchored edges pin their endpoints.
    for pid, hid in edge_anchor.items():
        pe, he = pattern.edge_map[pid], host.edge_map.get(hid)
        if he is None or he.type != pe.type:
            return []
        for p_end, h_end in ((pe.src, he.src), (pe.tgt, he.tgt)):
            if node_anchor.setdefault(p_end, h_end) != h_end:
                return []

    for pid, hid in node_anchor.items():
        if not host.has_node(hid) or pattern.node_type(pid) != host.node_type(hid):
            return []
    if len(set(node_anchor.values())) != len(node_anchor):
        return []

    order = [n for n in sorted(pattern.nodes, key=lambda n: (n.type, n.id))
             if n.id not in node_anchor]
    results: list[GraphMorphism] = []

    def node_ok(pid: str, hid: str, nm: dict[str, str]) -> bool:
        # Every pattern edge with both endpoints assigned must have a host image.
        for pe in pattern.edges:
            if pe.src in nm or pe.src == pid:
                if pe.tgt in nm or pe.tgt == pid:
                    trial = dict(nm)
                    trial[pid] = hid
                    if not _edge_candidates(pattern, host, pe, trial):
                        return False
        return True

    def assign_nodes(i: int, nm: dict[str, str], used: set[str]) -> Iterator[dict[str, str]]:
        if i == len(order):
            yield dict(nm)
            return
        pn = order[i]
        for hn in host.nodes:
            if hn.type != pn.type or hn.id in used:
                continue
            if not node_ok(pn.id, hn.id, nm):
                continue
            nm[pn.id] = hn.id
            used.add(hn.id)
            yield from assign_nodes(i + 1, nm, used)
            del nm[pn.id]
            used.remove(hn.id)

    def assign_edges(nm: dict[str, str]) -> Iterator[dict[str, str]]:
        pes = sorted(pattern.edges, key=lambda e: (e.type, e.id))
        def rec(j: int, em: dict[str, str], used: set[str]) -> Iterator[dict[str, str]]:
            if j == len(pes):
                yield dict(em)
                return
            pe = pes[j]
            if pe.id in edge_anchor:
                cands = [edge_anchor[pe.id]]
            else:
                cands = _edge_candidates(pattern, host, pe, nm)
            for hid in cands:
                if hid in used:
                    continue
                he = host.edge_map[hid]
                if he.src != nm[pe.src] or he.tgt != nm[pe.tgt] or he.type != pe.type:
                    continue
                em[pe.id] = hid
                used.add(hid)
                yield from rec(j + 1, em, used)
                del em[pe.id]
                used.remove(hid)
        yield from rec(0, {}, set())

    for nm in assign_nodes(0, dict(node_anchor), set(node_anchor.values())):
        for em in assign_edges(nm):
            results.append(GraphMorphism(pattern, host,
                                         tuple(nm.items()), tuple(em.items())))
            if limit is not None and len(results) >= limit:
                return sorted(results, key=lambda m: (m.node_pairs, m.edge_pairs))
    return sorted(results, key=lambda m: (m.node_pairs, m.edge_pairs))


def are_isomorphic(g1: Graph, g2: Graph,
                   anchor: Optional[Mapping[str, str]] = None) -> Optional[GraphMorphism]:
    """A bijective morphism g1 -> g2 when one exists, else None."""
    if len(g1.nodes) != len(g2.nodes) or len(g1.edges) != len(g2.edges):
        return None
    def profile(g: Graph):
        return (sorted(n.type for n in g.nodes), sorted(e.type for e in g.edges))
    if profile(g1) != profile(g2):
        return None
    found = find_monomorphisms(g1, g2, anchor=anchor, limit=1)
    return found[0] if found else None


def fresh_id(base: str, taken: set[str], prefix: str = "b:") -> str:
    candidate = prefix + base
    while candidate in taken:
        candidate = prefix + candidate
    return candidate


def pushout(left: GraphMorphism, right: GraphMorphism, prefix: str = "b:"
            ) -> tuple[Graph, GraphMorphism, GraphMorphism]:
    """Glue ``left.codomain`` (A) and ``right.codomain`` (B) along the shared apex.

    Ids of the A copy are preserved; B-only elements get fresh ids derived
    from their original ids with ``prefix`` so results are reproducible.
    Returns (P, A -> P, B -> P).
    """
    if left.domain != right.domain:
        raise GraphError("pushout legs do not share an apex")
    a, b = left.codomain, right.codomain
    taken = a.element_ids()

    glued_nodes = {right.node_map[m]: left.node_map[m] for m in left.node_map}
    glued_edges = {right.edge_map[m]: left.edge_map[m] for m in left.edge_map}

    b_node_to_p: dict[str, str] = {}
    nodes = list(a.nodes)
    for n in b.nodes:
        if n.id in glued_nodes:
            b_node_to_p[n.id] = glued_nodes[n.id]
        else:
            nid = fresh_id(n.id, taken, prefix)
            taken.add(nid)
            b_node_to_p[n.id] = nid
            nodes.append(Node(nid, n.type))
    b_edge_to_p: dict[str, str] = {}
    edges = list(a.edges)
    for e in b.edges:
        if e.id in glued_edges:
            b_edge_to_p[e.id] = glued_edges[e.id]
        else:
            eid = fresh_id(e.id, taken, prefix)
            taken.add(eid)
            b_edge_to_p[e.id] = eid
            edges.append(Edge(eid, e.type, b_node_to_p[e.src], b_node_to_p[e.tgt]))

    p = Graph(tuple(nodes), tuple(edges))
    a_to_p = GraphMorphism(a, p, tuple((n.id, n.id) for n in a.nodes),
                           tuple((e.id, e.id) for e in a.edges))
    b_to_p = GraphMorphism(b, p, tuple(b_node_to_p.items()), tuple(b_edge_to_p.items()))
    return p, a_to_p, b_to_p


def pullback(left: GraphMorphism, right: GraphMorphism
             ) -> tuple[Graph, GraphMorphism, GraphMorphism]:
    """Intersection of the images of two injective legs into a shared codomain.

    Returns (P, P -> A, P -> B) with P carried by A's ids.
    """
    if left.codomain != right.codomain:
        raise GraphError("pullback legs do not share a codomain")
    a, b = left.domain, right.domain
    r_nodes = {v: k for k, v in right.node_map.items()}
    r_edges = {v: k for k, v in right.edge_map.items()}
    node_ids = [n.id for n in a.nodes if left.node_map[n.id] in r_nodes]
    edge_ids = [e.id for e in a.edges if left.edge_map[e.id] in r_edges]
    p = a.subgraph(node_ids, edge_ids)
    p_to_a = GraphMorphism.inclusion(p, a)
    p_to_b = GraphMorphism(p, b,
                           tuple((i, r_nodes[left.node_map[i]]) for i in node_ids),
                           tuple((i, r_edges[left.edge_map[i]]) for i in edge_ids))
    return p, p_to_a, p_to_b


def all_morphisms(domain: Graph, codomain: Graph) -> Iterator[GraphMorphism]:
    """Brute-force enumeration of all (not necessarily injective) morphisms.

    Only used by tests and the pushout universal-property check; exponential.
    """
    nodes = [n for n in domain.nodes]
    cand = [[h.id for h in codomain.nodes if h.type == n.type] for n in nodes]
    for combo in itertools.product(*cand) if nodes else [()]:
        nm = {n.id: c for n, c in zip(nodes, combo)}
        edge_opts = []
        ok = True
        for e in domain.edges:
            opts = [h.id for h in codomain.edges
                    if h.type == e.type and h.src == nm[e.src] and h.tgt == nm[e.tgt]]
            if not opts:
                ok = False
                break
            edge_opts.append(opts)
        if not ok:
            continue
        for ecombo in itertools.product(*edge_opts) if domain.edges else [()]:
            em = {e.id: c for e, c in zip(domain.edges, ecombo)}
            yield _UncheckedMorphism(domain, codomain, nm, em)


class _UncheckedMorphism:
    """Plain (possibly non-injective) morphism used by the universal-property oracle."""

    def __init__(self, domain: Graph, codomain: Graph,
                 node_map: dict[str, str], edge_map: dict[str, str]):
        self.domain = domain
        self.codomain = codomain
        self.node_map = node_map
        self.edge_map = edge_map
