"""Maximal intersections, pattern deduction and annotation.

This module implements the machinery that enriches a declarative
specification before rule generation: precondition weakening between
included patterns, deduction of combined patterns from overlaps, transfer
of forbidden graphs into postconditions, and derivation of structure-reuse
patterns from duplication-forbidding constraints, plus the five-step
pipeline that orchestrates them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Optional

from .graphs import GraphError
from .patterns import Pattern, Specification
from .triples import (TripleGraph, TripleMorphism, are_triples_isomorphic,
                      find_triple_monomorphisms, triple_pushout)


@dataclass(frozen=True)
class MioSpan:
    """A maximal common subobject of two triples with its two embeddings."""

    apex: TripleGraph
    left: TripleMorphism     # apex -> first triple
    right: TripleMorphism    # apex -> second triple

    def key(self) -> tuple:
        pairs = []
        for part in (self.left, self.right):
            pairs.append(tuple(sorted(part.source_part.node_pairs + part.source_part.edge_pairs
                                      + part.target_part.node_pairs + part.target_part.edge_pairs
                                      + part.corr_pairs)))
        return (-self.apex.size, pairs[0], pairs[1])


@dataclass(frozen=True)
class Dep:
    """A dependency: structure whose presence defers enforcement elsewhere."""

    name: str
    embed: TripleMorphism    # D -> Q


@dataclass(frozen=True)
class AnnotatedPattern:
    pattern: Pattern
    deps: tuple[Dep, ...] = ()
    parents: tuple[str, ...] = ()
    provenance: tuple[str, ...] = ()


# -- maximal intersections -----------------------------------------------------


def _injective_matchings(xs: list, ys: list) -> Iterator[dict]:
    """All maximum-size injective matchings between two element lists."""
    k = min(len(xs), len(ys))
    if k == 0:
        yield {}
        return
    for chosen in itertools.combinations(xs, k):
        for perm in itertools.permutations(ys, k):
            yield dict(zip(chosen, perm))


def _node_matchings(g1, g2) -> Iterator[dict[str, str]]:
    by_type1: dict[str, list[str]] = {}
    by_type2: dict[str, list[str]] = {}
    for n in g1.nodes:
        by_type1.setdefault(n.type, []).append(n.id)
    for n in g2.nodes:
        by_type2.setdefault(n.type, []).append(n.id)
    types = sorted(set(by_type1) & set(by_type2))
    per_type = [list(_injective_matchings(sorted(by_type1[t]), sorted(by_type2[t])))
                for t in types]
    for combo in itertools.product(*per_type) if per_type else [()]:
        merged: dict[str, str] = {}
        for m in combo:
            merged.update(m)
        yield merged


def _edge_matchings(g1, g2, nm: dict[str, str]) -> Iterator[dict[str, str]]:
    buckets: dict[tuple, list[str]] = {}
    for e in g1.edges:
        if e.src in nm and e.tgt in nm:
            buckets.setdefault((e.type, nm[e.src], nm[e.tgt]), []).append(e.id)
    host: dict[tuple, list[str]] = {}
    for e in g2.edges:
        host.setdefault((e.type, e.src, e.tgt), []).append(e.id)
    keys = sorted(buckets)
    per_key = [list(_injective_matchings(sorted(buckets[k]), sorted(host.get(k, []))))
               for k in keys]
    for combo in itertools.product(*per_key) if per_key else [()]:
        merged: dict[str, str] = {}
        for m in combo:
            merged.update(m)
        yield merged


def _corr_matchings(t1: TripleGraph, t2: TripleGraph, snm: dict[str, str],
                    tnm: dict[str, str]) -> Iterator[dict[str, str]]:
    """Maximal matchings of corr nodes compatible with the node pairings."""
    compat = {c1.id: sorted(c2.id for c2 in t2.corr
                            if c2.type == c1.type
                            and snm.get(c1.source) == c2.source
                            and tnm.get(c1.target) == c2.target)
              for c1 in t1.corr}
    order = sorted(compat)

    def rec(i: int, cur: dict[str, str], used: set[str]) -> Iterator[dict[str, str]]:
        if i == len(order):
            # maximal: no compatible free pair may remain
            for c1 in order:
                if c1 not in cur and any(c2 not in used for c2 in compat[c1]):
                    return
            yield dict(cur)
            return
        c1 = order[i]
        options = [c2 for c2 in compat[c1] if c2 not in used]
        for c2 in options:
            cur[c1] = c2
            used.add(c2)
            yield from rec(i + 1, cur, used)
            del cur[c1]
            used.remove(c2)
        yield from rec(i + 1, cur, used)   # leave unmatched (maximality filtered)

    yield from rec(0, {}, set())


def _span_from_pairing(t1: TripleGraph, t2: TripleGraph, snm, sem, tnm, tem, cm
                       ) -> MioSpan:
    from .graphs import GraphMorphism
    apex = t1.subtriple(snm.keys(), sem.keys(), cm.keys(), tnm.keys(), tem.keys())
    left = TripleMorphism.inclusion(apex, t1)
    right = TripleMorphism(
        apex, t2,
        GraphMorphism(apex.source, t2.source, tuple(snm.items()), tuple(sem.items())),
        GraphMorphism(apex.target, t2.target, tuple(tnm.items()), tuple(tem.items())),
        tuple(cm.items()))
    return MioSpan(apex, left, right)


def _size_tuple(t: TripleGraph) -> tuple[int, ...]:
    return (len(t.source.nodes), len(t.source.edges), len(t.corr),
            len(t.target.nodes), len(t.target.edges))


def mi(t1: TripleGraph, t2: TripleGraph) -> list[MioSpan]:
    """Maximal non-empty common-subobject spans, deduplicated up to apex
    isomorphism, in a deterministic order.

    A span is kept only if its apex does not embed into a strictly larger
    apex of another common subobject; of spans with isomorphic apexes the
    canonically first survives.
    """
    raw: dict[tuple, MioSpan] = {}
    for snm in _node_matchings(t1.source, t2.source):
        for tnm in _node_matchings(t1.target, t2.target):
            for cm in _corr_matchings(t1, t2, snm, tnm):
                for sem in _edge_matchings(t1.source, t2.source, snm):
                    for tem in _edge_matchings(t1.target, t2.target, tnm):
                        span = _span_from_pairing(t1, t2, snm, sem, tnm, tem, cm)
                        if span.apex.is_empty():
                            continue
                        raw.setdefault(span.key(), span)
    spans = sorted(raw.values(), key=lambda s: s.key())

    surviving = []
    for s in spans:
        dominated = any(
            _size_tuple(s.apex) != _size_tuple(t.apex)
            and find_triple_monomorphisms(s.apex, t.apex, limit=1)
            for t in spans if t is not s)
        if not dominated:
            surviving.append(s)

    deduped: list[MioSpan] = []
    for s in surviving:
        if not any(are_triples_isomorphic(s.apex, d.apex) for d in deduped):
            deduped.append(s)
    return deduped


# -- precondition weakening ----------------------------------------------------


def _transfer_condition(cond: TripleGraph, q1: TripleGraph,
                        emb: TripleMorphism) -> TripleGraph:
    """Glue a negative condition of the smaller pattern onto the larger
    positive graph along the embedding; the result extends Q2 literally."""
    incl = TripleMorphism.inclusion(q1, cond)
    glued, _, _ = triple_pushout(emb, incl)
    return glued


def _subsumed(cond: TripleGraph, q1: TripleGraph, emb: TripleMorphism,
              receiver_conds: Iterable[tuple[str, TripleGraph]]) -> bool:
    anchor = {}
    for pairs in (emb.source_part.node_pairs, emb.source_part.edge_pairs,
                  emb.target_part.node_pairs, emb.target_part.edge_pairs,
                  emb.corr_pairs):
        anchor.update(dict(pairs))
    return any(find_triple_monomorphisms(cond, c2, anchor=anchor, limit=1)
               for _, c2 in receiver_conds)


def pw(spec: Specification) -> Specification:
    """Precondition weakening over all pattern pairs.

    Whenever one S-pattern's positive graph embeds in another's, every
    negative precondition of the smaller that is not already subsumed by a
    condition of the larger is transferred, glued along the embedding.
    """
    patterns = list(spec.patterns)
    for j, receiver in enumerate(patterns):
        if receiver.kind != "S":
            continue
        conds = list(receiver.neg_pre)
        names = {n for n, _ in conds}
        for i, donor in enumerate(patterns):
            if i == j or donor.kind != "S" or donor.positive.is_empty():
                continue
            for emb in find_triple_monomorphisms(donor.positive, receiver.positive):
                for cname, cond in donor.neg_pre:
                    if _subsumed(cond, donor.positive, emb, conds):
                        continue
                    fresh = f"{donor.name}:{cname}"
                    k = 2
                    while fresh in names:
                        fresh = f"{donor.name}:{cname}~{k}"
                        k += 1
                    names.add(fresh)
                    conds.append((fresh, _transfer_condition(cond, donor.positive, emb)))
        if len(conds) != len(receiver.neg_pre):
            patterns[j] = replace(receiver, neg_pre=tuple(conds))
    return Specification(spec.metamodel, tuple(patterns))


# -- S/C-deduction ---------------------------------------------------------


def _extension_iso(a: TripleGraph, b: TripleGraph, fixed: TripleGraph) -> bool:
    """Isomorphism a ~ b fixing the shared subtriple pointwise."""
    anchor = {i: i for i in fixed.element_ids()}
    return are_triples_isomorphic(a, b, anchor=anchor) is not None


def _dedup_conditions(conds: list[tuple[str, TripleGraph]],
                      over: TripleGraph) -> tuple[tuple[str, TripleGraph], ...]:
    kept: list[tuple[str, TripleGraph]] = []
    for name, g in conds:
        if any(_extension_iso(g, h, over) for _, h in kept):
            continue
        base, k = name, 2
        while any(name == n for n, _ in kept):
            name = f"{base}~{k}"
            k += 1
        kept.append((name, g))
    return tuple(kept)


def _image_union(base: TripleGraph, parts: Iterable[set[str]]) -> TripleGraph:
    ids: set[str] = set()
    for p in parts:
        ids |= p
    return base.subtriple_by_ids(ids)


def deduce_pair(p1: Pattern, p2: Pattern, span: MioSpan,
                name: Optional[str] = None) -> tuple[Pattern, TripleMorphism, TripleMorphism]:
    """Deduce the combined pattern for one maximal overlap of two patterns.

    The new positive graph glues the two positives along the overlap; the
    positive precondition glues the overlap with both parents' positive
    preconditions; every parent negative condition is carried over, with
    isomorphic duplicates eliminated.  Returns the pattern plus the two
    embeddings of the parent positives into the new positive graph.
    """
    if span.apex.is_empty():
        raise GraphError("deduction span has an empty apex")
    # Keep the second pattern's ids; the first pattern's extra elements are renamed.
    q_new, leg2, leg1 = triple_pushout(span.right, span.left)

    apex_ids = span.right.compose(leg2).image_ids()
    c1_ids = TripleMorphism.inclusion(p1.pos_pre, p1.positive).compose(leg1).image_ids()
    c2_ids = TripleMorphism.inclusion(p2.pos_pre, p2.positive).compose(leg2).image_ids()
    pos_pre = _image_union(q_new, [apex_ids, c1_ids, c2_ids])

    pre: list[tuple[str, TripleGraph]] = []
    post: list[tuple[str, TripleGraph]] = []
    for p, leg in ((p1, leg1), (p2, leg2)):
        for cname, cond in p.neg_pre:
            pre.append((cname, _transfer_condition(cond, p.positive, leg)))
        for cname, cond in p.neg_post:
            post.append((cname, _transfer_condition(cond, p.positive, leg)))

    pattern = Pattern(name or f"{p1.name}.{p2.name}", "C", pos_pre, q_new,
                      _dedup_conditions(pre, q_new), _dedup_conditions(post, q_new))
    return pattern, leg1, leg2


def s_deduce(p1: Pattern, p2: Pattern, span: MioSpan,
             name: Optional[str] = None) -> Pattern:
    """Combined pattern of two S-patterns over one maximal overlap."""
    return deduce_pair(p1, p2, span, name)[0]


def c_deduce(p1: Pattern, p2: Pattern, span: MioSpan,
             name: Optional[str] = None) -> Pattern:
    """Generalization of S-deduction that also glues the positive
    preconditions of the parents over their common part."""
    return deduce_pair(p1, p2, span, name)[0]


def _dep_equivalent(a: Dep, b: Dep) -> bool:
    # Same subobject of Q and isomorphic dependency graphs: interchangeable.
    return (a.embed.image_ids() == b.embed.image_ids()
            and are_triples_isomorphic(a.embed.domain, b.embed.domain) is not None)


def add_dep(annotated: AnnotatedPattern, dep: Dep) -> AnnotatedPattern:
    # A dependency granted by the positive precondition would turn into a NAC
    # that blocks the rule unconditionally, making the pattern useless.
    if dep.embed.image_ids() <= annotated.pattern.pos_pre.element_ids():
        return annotated
    for existing in annotated.deps:
        if _dep_equivalent(existing, dep):
            return annotated
    return replace(annotated, deps=annotated.deps + (dep,))


def s_annotate(a1: AnnotatedPattern, a2: AnnotatedPattern
               ) -> list[AnnotatedPattern]:
    """Annotate two patterns with their maximal overlaps and return them
    together with the freshly deduced patterns (no dependencies yet)."""
    self_pair = a1.pattern.name == a2.pattern.name
    out1, out2 = a1, a2
    derived = []
    for idx, span in enumerate(mi(a1.pattern.positive, a2.pattern.positive)):
        dep_name = f"{a1.pattern.name}.{a2.pattern.name}"
        if idx:
            dep_name += f"~{idx + 1}"
        out1 = add_dep(out1, Dep(dep_name, span.left))
        if self_pair:
            out1 = add_dep(out1, Dep(dep_name, span.right))
        else:
            out2 = add_dep(out2, Dep(dep_name, span.right))
        pattern, leg1, leg2 = deduce_pair(a1.pattern, a2.pattern, span, dep_name)
        derived.append(AnnotatedPattern(
            pattern, (), (a1.pattern.name, a2.pattern.name),
            (f"deduced from {a1.pattern.name} and {a2.pattern.name} over a "
             f"{span.apex.size}-element overlap",)))
    if self_pair:
        return [out1] + derived
    return [out1, out2] + derived


c_annotate = s_annotate


# -- completion and N-family deduction ---------------------------------------


def completion(m: TripleGraph, t: TripleGraph,
               embed: Optional[TripleMorphism] = None) -> TripleGraph:
    """Least subtriple of ``t`` containing ``m`` closed under relatedness.

    Closure clauses: a source node pulls in its related target nodes and
    vice versa (via t's correspondences); all unrelated nodes of t are
    included; edges with both endpoints included are included; corr nodes
    linking included pairs are included.
    """
    if embed is not None:
        m = embed.image()
        t = embed.codomain
    if not t.contains(m):
        raise GraphError("completion requires an embedded subtriple")
    ids = m.element_ids()

    related_src = {c.source for c in t.corr}
    related_tgt = {c.target for c in t.corr}
    for n in t.source.nodes:
        if n.id not in related_src:
            ids.add(n.id)
    for n in t.target.nodes:
        if n.id not in related_tgt:
            ids.add(n.id)

    changed = True
    while changed:
        changed = False
        for c in t.corr:
            if c.source in ids and c.target not in ids:
                ids.add(c.target)
                changed = True
            if c.target in ids and c.source not in ids:
                ids.add(c.source)
                changed = True
            if c.source in ids and c.target in ids and c.id not in ids:
                ids.add(c.id)
                changed = True
        for e in t.source.edges + t.target.edges:
            if e.id not in ids and e.src in ids and e.tgt in ids:
                ids.add(e.id)
                changed = True
    return t.subtriple_by_ids(ids)


def n_deduce(p: Pattern, np: Pattern) -> Pattern:
    """Add the forbidden graph of an N-pattern as postconditions of ``p``,
    glued over every maximal overlap, isomorphic duplicates eliminated."""
    if np.kind != "N":
        raise GraphError(f"{np.name} is not an N-pattern")
    if p.positive.is_empty():
        return p
    posts = list(p.neg_post)
    fresh: list[tuple[str, TripleGraph]] = []
    for idx, span in enumerate(mi(p.positive, np.forbidden)):
        glued, _, _ = triple_pushout(span.left, span.right)
        cname = np.name if not idx else f"{np.name}~{idx + 1}"
        fresh.append((cname, glued))
    merged = list(posts)
    for cname, g in fresh:
        if any(_extension_iso(g, h, p.positive) for _, h in merged):
            continue
        merged.append((cname, g))
    if len(merged) == len(posts):
        return p
    return replace(p, neg_post=_dedup_conditions(merged, p.positive))


def decompositions(s: TripleGraph) -> list[tuple[TripleGraph, TripleGraph]]:
    """Ways of writing ``s`` as a gluing of two isomorphic proper subtriples.

    Each pair (s1, s2) satisfies s1 union s2 = s with s1 isomorphic to s2
    and both halves proper; the list is canonically ordered.
    """
    all_ids = sorted(s.element_ids())
    subs = []
    for r in range(1, len(all_ids)):
        for combo in itertools.combinations(all_ids, r):
            ids = set(combo)
            if _closed(s, ids):
                subs.append(s.subtriple_by_ids(ids))
    out = []
    for s1, s2 in itertools.combinations(subs, 2):
        if s1.element_ids() | s2.element_ids() != set(all_ids):
            continue
        if are_triples_isomorphic(s1, s2):
            out.append((s1, s2))
    return sorted(out, key=lambda pair: (sorted(pair[0].element_ids()),
                                         sorted(pair[1].element_ids())))


def _closed(t: TripleGraph, ids: set[str]) -> bool:
    for e in t.source.edges + t.target.edges:
        if e.id in ids and (e.src not in ids or e.tgt not in ids):
            return False
    for c in t.corr:
        if c.id in ids and (c.source not in ids or c.target not in ids):
            return False
    return True


def _np_core(p: Pattern, np: Pattern) -> Optional[tuple[Pattern, TripleGraph, list[str]]]:
    if np.kind != "N":
        raise GraphError(f"{np.name} is not an N-pattern")
    s = np.forbidden
    if p.positive.is_empty() or s.is_empty():
        return None
    spans = mi(p.positive, s)
    decomps = decompositions(s)
    notes = []
    chosen = None
    for span in spans:
        for s1, s2 in decomps:
            if are_triples_isomorphic(span.apex, s1):
                notes.append(f"overlap {sorted(span.left.image_ids())} matches "
                             f"decomposition half {sorted(s1.element_ids())}")
                if chosen is None:
                    chosen = span
    if chosen is None:
        return None
    reused = completion(chosen.left.image(), p.positive)
    pos_pre = _image_union(p.positive, [p.pos_pre.element_ids(), reused.element_ids()])
    pattern = Pattern(f"{p.name}.{np.name}", "C", pos_pre, p.positive,
                      p.neg_pre, p.neg_post)
    return pattern, reused, notes


def np_deduce(p: Pattern, np: Pattern) -> Optional[Pattern]:
    """Derive a structure-reuse pattern when the forbidden graph is a gluing
    of two isomorphic halves, one of which occurs maximally in ``p``'s
    positive graph.  The reused structure (completed inside Q) becomes the
    positive precondition."""
    core = _np_core(p, np)
    return core[0] if core else None


def cnp_deduce(p: Pattern, np: Pattern) -> Optional[Pattern]:
    """As :func:`np_deduce`, but the derived precondition additionally glues
    ``p``'s own positive precondition over their common part."""
    return np_deduce(p, np)


def np_annotate(a: AnnotatedPattern, an: AnnotatedPattern
                ) -> list[AnnotatedPattern]:
    """Annotate ``a`` with the reused structure and return the derived
    pattern alongside the (unchanged) N-pattern."""
    core = _np_core(a.pattern, an.pattern)
    if core is None:
        return [a, an]
    pattern, reused, notes = core
    dep = Dep(pattern.name, TripleMorphism.inclusion(reused, a.pattern.positive))
    derived = AnnotatedPattern(pattern, (), (a.pattern.name, an.pattern.name),
                               tuple(notes))
    return [add_dep(a, dep), an, derived]


# -- pattern isomorphism and the pipeline -------------------------------------


def _conditions_match(conds1, conds2, iso: TripleMorphism) -> bool:
    if len(conds1) != len(conds2):
        return False
    anchor = {}
    for pairs in (iso.source_part.node_pairs, iso.source_part.edge_pairs,
                  iso.target_part.node_pairs, iso.target_part.edge_pairs,
                  iso.corr_pairs):
        anchor.update(dict(pairs))

    def match(remaining1, remaining2) -> bool:
        if not remaining1:
            return True
        (_, g1), *rest1 = remaining1
        for k, (_, g2) in enumerate(remaining2):
            if are_triples_isomorphic(g1, g2, anchor=anchor):
                if match(rest1, remaining2[:k] + remaining2[k + 1:]):
                    return True
        return False

    return match(list(conds1), list(conds2))


def patterns_isomorphic(p: Pattern, q: Pattern) -> bool:
    """Structural isomorphism compatible with all pattern embeddings."""
    if p.kind != q.kind:
        return False
    if len(p.neg_pre) != len(q.neg_pre) or len(p.neg_post) != len(q.neg_post):
        return False
    if _size_tuple(p.positive) != _size_tuple(q.positive):
        return False
    if _size_tuple(p.pos_pre) != _size_tuple(q.pos_pre):
        return False
    for iso in find_triple_monomorphisms(p.positive, q.positive):
        image = {**iso.source_part.node_map, **iso.source_part.edge_map,
                 **iso.target_part.node_map, **iso.target_part.edge_map,
                 **iso.corr_map}
        if {image[i] for i in p.pos_pre.element_ids()} != q.pos_pre.element_ids():
            continue
        if not _conditions_match(p.neg_pre, q.neg_pre, iso):
            continue
        if not _conditions_match(p.neg_post, q.neg_post, iso):
            continue
        return True
    return False


@dataclass
class _Derived:
    annotated: AnnotatedPattern
    parent_legs: dict[str, TripleMorphism]   # parent positive -> derived positive


def run_deduction_pipeline(spec: Specification, enable_np: bool = True
                           ) -> list[AnnotatedPattern]:
    """The full deduction pass: precondition weakening, pairwise annotation,
    reuse deduction, postcondition transfer, dependency inheritance.

    Derived patterns isomorphic to existing ones are not added.  The steps
    run once, in order; derived patterns are not re-paired with each other.
    """
    problems = spec.validate(initial=True)
    if problems:
        raise GraphError("invalid specification: " + "; ".join(problems))

    weakened = pw(spec)
    n_patterns = weakened.n_patterns()

    entries: list[_Derived] = [
        _Derived(AnnotatedPattern(p), {}) for p in weakened.positive_patterns()]
    initial_count = len(entries)

    def exists(pattern: Pattern) -> bool:
        return any(patterns_isomorphic(pattern, e.annotated.pattern) for e in entries)

    def unique_name(base: str) -> str:
        names = {e.annotated.pattern.name for e in entries}
        name, k = base, 2
        while name in names:
            name = f"{base}~{k}"
            k += 1
        return name

    # pairwise annotation over the initial patterns (self-pairs included)
    for i in range(initial_count):
        for j in range(i, initial_count):
            e1, e2 = entries[i], entries[j]
            p1, p2 = e1.annotated.pattern, e2.annotated.pattern
            for span in mi(p1.positive, p2.positive):
                dep_name = unique_name(f"{p1.name}.{p2.name}")
                entries[i].annotated = add_dep(entries[i].annotated,
                                               Dep(dep_name, span.left))
                entries[j].annotated = add_dep(entries[j].annotated,
                                               Dep(dep_name, span.right))
                derived, leg1, leg2 = deduce_pair(p1, p2, span, dep_name)
                if exists(derived):
                    continue
                entries.append(_Derived(
                    AnnotatedPattern(derived, (), (p1.name, p2.name),
                                     (f"pair deduction of {p1.name} and {p2.name}",)),
                    {p1.name: leg1, p2.name: leg2}))

    # reuse deduction against every N-pattern, initial and derived patterns alike
    if enable_np:
        idx = 0
        while idx < len(entries):
            entry = entries[idx]
            for nn in n_patterns:
                core = _np_core(entry.annotated.pattern, nn)
                if core is None:
                    continue
                derived, reused, notes = core
                dep = Dep(derived.name, TripleMorphism.inclusion(
                    reused, entry.annotated.pattern.positive))
                entry.annotated = add_dep(entry.annotated, dep)
                if exists(derived):
                    continue
                entries.append(_Derived(
                    AnnotatedPattern(derived, (),
                                     (entry.annotated.pattern.name, nn.name),
                                     tuple(notes)),
                    {entry.annotated.pattern.name:
                         TripleMorphism.identity(derived.positive)}))
            idx += 1

    # transfer forbidden graphs into postconditions, then drop the N-patterns
    for entry in entries:
        p = entry.annotated.pattern
        for nn in n_patterns:
            p = n_deduce(p, nn)
        entry.annotated = replace(entry.annotated, pattern=p)

    # dependency inheritance along derivation order
    by_name = {e.annotated.pattern.name: e for e in entries}
    for entry in entries:
        if not entry.annotated.parents:
            continue
        pos_pre_ids = entry.annotated.pattern.pos_pre.element_ids()
        for parent_name in entry.annotated.parents:
            parent = by_name.get(parent_name)
            leg = entry.parent_legs.get(parent_name)
            if parent is None or leg is None:
                continue
            for dep in parent.annotated.deps:
                composed = dep.embed.compose(leg)
                if composed.image_ids() <= pos_pre_ids:
                    continue   # already granted by the positive precondition
                entry.annotated = add_dep(entry.annotated,
                                          Dep(dep.name, composed))

    return [e.annotated for e in entries]
