"""Declarative model-to-model transformation with triple-graph patterns.

The package compiles pattern specifications into operational triple-graph
rewrite rules and executes forward/backward transformations with built-in
verification against the declarative semantics.
"""

from .graphs import (Edge, EdgeType, Graph, GraphError, GraphMorphism, Node,
                     TypeGraph, are_isomorphic, find_monomorphisms, pullback,
                     pushout)
from .triples import (CorrNode, CorrType, MetamodelTriple, TripleGraph,
                      TripleMorphism, are_triples_isomorphic,
                      find_triple_monomorphisms, restrict, triple_pullback,
                      triple_pushout, validate_triple)
from .patterns import (Pattern, Specification, check_pattern, check_spec,
                       directed_base)
from .deduction import (AnnotatedPattern, MioSpan, completion, mi, pw,
                        run_deduction_pipeline)
from .rules import TGGRule, derive_rule, generate_rules, left_extension
from .engine import (TransformError, TransformResult, apply_rule,
                     find_applicable, saturate, transform)
from .analysis import analyze, hippocratic_probe

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
