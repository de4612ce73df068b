from __future__ import annotations

import pytest

from tripat.graphs import Graph, TypeGraph
from tripat.triples import CorrNode, CorrType, MetamodelTriple, TripleGraph


@pytest.fixture
def ab_metamodel() -> MetamodelTriple:
    """Two node types and one correspondence type; no edges."""
    return MetamodelTriple(TypeGraph(frozenset({"A"}), ()),
                           TypeGraph(frozenset({"B"}), ()),
                           (CorrType("rel"),))


def ab_triple(na: int, nb: int, corr_pairs) -> TripleGraph:
    """Host over the A/B metamodel: a0..a(na-1), b0.., plus corr pairs."""
    return TripleGraph(
        Graph.build({f"a{i}": "A" for i in range(na)}),
        Graph.build({f"b{j}": "B" for j in range(nb)}),
        tuple(CorrNode(f"c{i}", "rel", s, t)
              for i, (s, t) in enumerate(sorted(corr_pairs))))


def graph(nodes=None, edges=()) -> Graph:
    return Graph.build(nodes or {}, edges)


def triple(source=None, target=None, corr=()) -> TripleGraph:
    return TripleGraph(source or Graph(), target or Graph(),
                       tuple(CorrNode(*c) for c in corr))
