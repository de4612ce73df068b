from __future__ import annotations

import itertools

import pytest

from conftest import ab_triple, graph, triple
from tripat.deduction import (AnnotatedPattern, MioSpan, c_deduce,
                              completion, decompositions, mi, np_annotate,
                              np_deduce, cnp_deduce, n_deduce, pw,
                              run_deduction_pipeline, s_annotate, s_deduce)
from tripat.fixtures import load_spec
from tripat.graphs import Graph
from tripat.patterns import Pattern, Specification, check_spec, n_pattern
from tripat.triples import (TripleGraph, TripleMorphism,
                            are_triples_isomorphic,
                            find_triple_monomorphisms)


@pytest.fixture(scope="module")
def class2rel():
    return load_spec("class2rel")


@pytest.fixture(scope="module")
def weakened(class2rel):
    return pw(class2rel)


def q(spec, name):
    return spec.pattern(name).positive


def brute_correspondences(t1: TripleGraph, t2: TripleGraph):
    """Every valid common-subobject correspondence, exhaustively (tiny inputs).

    A correspondence is a set of pairs over nodes/edges/corrs, injective both
    ways, with edges requiring endpoint pairs and corr nodes requiring both
    anchor pairs.
    """
    node_pairs = [(n1.id, n2.id) for n1 in t1.source.nodes
                  for n2 in t2.source.nodes if n1.type == n2.type]
    node_pairs += [(n1.id, n2.id) for n1 in t1.target.nodes
                   for n2 in t2.target.nodes if n1.type == n2.type]
    edge_pairs = [(e1.id, e2.id) for e1 in t1.source.edges
                  for e2 in t2.source.edges if e1.type == e2.type]
    edge_pairs += [(e1.id, e2.id) for e1 in t1.target.edges
                   for e2 in t2.target.edges if e1.type == e2.type]
    corr_pairs = [(c1.id, c2.id) for c1 in t1.corr for c2 in t2.corr
                  if c1.type == c2.type]
    all_pairs = node_pairs + edge_pairs + corr_pairs

    def endpoints(t, eid):
        for e in t.source.edges + t.target.edges:
            if e.id == eid:
                return e.src, e.tgt
        return None

    out = []
    for r in range(1, len(all_pairs) + 1):
        for combo in itertools.combinations(all_pairs, r):
            left = [a for a, _ in combo]
            right = [b for _, b in combo]
            if len(set(left)) != r or len(set(right)) != r:
                continue
            chosen = dict(combo)
            ok = True
            for a, b in combo:
                ep1, ep2 = endpoints(t1, a), endpoints(t2, b)
                if ep1 is not None:
                    if ep2 is None or chosen.get(ep1[0]) != ep2[0] \
                            or chosen.get(ep1[1]) != ep2[1]:
                        ok = False
                        break
                if a in t1.corr_map:
                    c1, c2 = t1.corr_map[a], t2.corr_map[b]
                    if chosen.get(c1.source) != c2.source \
                            or chosen.get(c1.target) != c2.target:
                        ok = False
                        break
            if ok:
                out.append(chosen)
    return out


class TestMi:
    def test_ct_aco_single_square(self, class2rel):
        spans = mi(q(class2rel, "C-T"), q(class2rel, "A-Co"))
        assert len(spans) == 1
        apex = spans[0].apex
        assert apex.size == 3 and len(apex.corr) == 1

    def test_aco2_notdupf_dedups_to_one(self, class2rel):
        spans = mi(q(class2rel, "A-Co2"), class2rel.pattern("notDupF").forbidden)
        assert len(spans) == 1
        apex = spans[0].apex
        assert sorted(n.type for n in apex.target.nodes) == ["F", "T", "T"]
        assert len(apex.target.edges) == 2

    def test_disjoint_types_empty(self):
        t1 = triple(graph({"c": "C"}))
        t2 = triple(graph({"t": "X"}))
        assert mi(t1, t2) == []

    def test_ct_aco2_squares_survive(self, class2rel):
        # both class/table squares of A-Co2 are maximal; they are isomorphic
        # apexes, so one canonical representative remains
        spans = mi(q(class2rel, "C-T"), q(class2rel, "A-Co2"))
        assert len(spans) == 1
        assert spans[0].apex.size == 3
        # the representative pairs the first square
        assert dict(spans[0].right.corr_pairs)["r1"] == "r1"

    def test_self_mio_is_identity_class(self, class2rel):
        aco = q(class2rel, "A-Co")
        spans = mi(aco, aco)
        assert len(spans) == 1
        assert spans[0].apex.size == aco.size

    def test_maximality_against_brute_force(self):
        # every returned apex admits no strict embedding into another valid
        # correspondence apex; every valid correspondence embeds into some
        # returned apex (exhaustive on small inputs)
        t1 = triple(graph({"a1": "A", "a2": "A"}, [("e1", "r", "a1", "a2")]),
                    graph({"b1": "B"}), [("c1", "rel", "a1", "b1")])
        t2 = triple(graph({"x1": "A", "x2": "A"},
                          [("f1", "r", "x1", "x2"), ("f2", "r", "x2", "x1")]),
                    graph({"y1": "B", "y2": "B"}), [("k1", "rel", "x1", "y1")])
        spans = mi(t1, t2)
        assert spans

        def apex_of(corr: dict) -> TripleGraph:
            return t1.subtriple_by_ids(set(corr))

        valid = brute_correspondences(t1, t2)
        returned = [s.apex for s in spans]
        for corr in valid:
            apex = apex_of(corr)
            dominated = any(
                find_triple_monomorphisms(apex, big, limit=1) for big in returned)
            assert dominated, corr
        for apex in returned:
            for corr in valid:
                other = apex_of(corr)
                if (len(other.element_ids()) > len(apex.element_ids())
                        and find_triple_monomorphisms(apex, other, limit=1)):
                    pytest.fail(f"apex not maximal: {sorted(apex.element_ids())} "
                                f"embeds into {sorted(corr)}")

    def test_deterministic(self, class2rel):
        a = q(class2rel, "A-Co2")
        b = class2rel.pattern("notDupF").forbidden
        assert [s.key() for s in mi(a, b)] == [s.key() for s in mi(a, b)]


class TestPw:
    def test_ct_aco_transfer(self, class2rel, weakened):
        aco = weakened.pattern("A-Co")
        assert len(aco.neg_pre) == 1
        name, cond = aco.neg_pre[0]
        assert "noParent" in name
        # the transferred condition extends Q(A-Co) with a parent edge at c1
        extra_edges = [e for e in cond.source.edges
                       if e.type == "parent" and e.src == "c1"]
        assert len(extra_edges) == 1

    def test_aco2_gets_both_squares(self, weakened):
        aco2 = weakened.pattern("A-Co2")
        assert len(aco2.neg_pre) == 2
        parents = sorted(e.src for _, cond in aco2.neg_pre
                         for e in cond.source.edges if e.type == "parent")
        assert parents == ["c1", "c2"]

    def test_identical_pre_sets_unchanged(self, ab_metamodel):
        qq = triple(graph({"a1": "A"}), graph({"b1": "B"}),
                    [("c1", "rel", "a1", "b1")])
        cond = TripleGraph(Graph.build({"a1": "A", "a2": "A"}),
                           qq.target, qq.corr)
        p1 = Pattern("p1", "S", positive=qq, neg_pre=(("c", cond),))
        p2 = Pattern("p2", "S", positive=qq, neg_pre=(("c", cond),))
        spec = Specification(ab_metamodel, (p1, p2))
        out = pw(spec)
        assert len(out.pattern("p1").neg_pre) == 1
        assert len(out.pattern("p2").neg_pre) == 1

    def test_originals_kept(self, class2rel, weakened):
        assert [p.name for p in weakened.patterns] == \
            [p.name for p in class2rel.patterns]
        assert weakened.pattern("C-T") == class2rel.pattern("C-T")


class TestSDeduce:
    def test_fig5_derived_pattern(self, weakened):
        ct, aco = weakened.pattern("C-T"), weakened.pattern("A-Co")
        span = mi(ct.positive, aco.positive)[0]
        derived = s_deduce(ct, aco, span, "C-T.A-Co")
        assert derived.kind == "C"
        assert are_triples_isomorphic(derived.positive, aco.positive)
        # positive precondition is the class/table square
        assert derived.pos_pre.size == 3
        # the two transferred preconditions are isomorphic; one is eliminated
        assert len(derived.neg_pre) == 1

    def test_self_gluing_degenerate(self, weakened):
        ct = weakened.pattern("C-T")
        span = mi(ct.positive, ct.positive)[0]
        derived = s_deduce(ct, ct, span, "C-T.C-T")
        assert derived.pos_pre == derived.positive
        from tripat.analysis import find_tautologies
        spec = Specification(weakened.metamodel, (derived,))
        assert find_tautologies(spec)

    def test_empty_apex_rejected(self, weakened):
        ct = weakened.pattern("C-T")
        bad = MioSpan(TripleGraph(),
                      TripleMorphism.inclusion(TripleGraph(), ct.positive),
                      TripleMorphism.inclusion(TripleGraph(), ct.positive))
        with pytest.raises(Exception):
            s_deduce(ct, ct, bad)


class TestSAnnotate:
    def test_fig5_annotation(self, weakened):
        a1 = AnnotatedPattern(weakened.pattern("C-T"))
        a2 = AnnotatedPattern(weakened.pattern("A-Co"))
        out = s_annotate(a1, a2)
        assert len(out) == 3
        new_ct, new_aco, derived = out
        assert len(new_ct.deps) == 1
        assert len(new_aco.deps) == 1
        assert new_aco.deps[0].embed.image_ids() == {"c1", "r1", "t1"}
        assert derived.pattern.name == "C-T.A-Co"

    def test_disjoint_pair_unchanged(self, ab_metamodel):
        p1 = Pattern("p1", "S", positive=triple(graph({"a1": "A"})))
        p2 = Pattern("p2", "S", positive=triple(None, graph({"b1": "B"})))
        out = s_annotate(AnnotatedPattern(p1), AnnotatedPattern(p2))
        assert len(out) == 2
        assert not out[0].deps and not out[1].deps

    def test_self_pair_dep_added_once(self, weakened):
        ct = AnnotatedPattern(weakened.pattern("C-T"))
        out = s_annotate(ct, ct)
        assert len(out) == 2   # the pattern itself plus one derived
        assert len(out[0].deps) == 1


class TestCDeduce:
    def test_s_inputs_reduce_to_s_deduce(self, weakened):
        ct, aco = weakened.pattern("C-T"), weakened.pattern("A-Co")
        span = mi(ct.positive, aco.positive)[0]
        assert c_deduce(ct, aco, span, "x") == s_deduce(ct, aco, span, "x")

    def test_precondition_gluing_over_square(self, weakened):
        # two C-patterns sharing the class/table square: the derived
        # precondition glues both preconditions over it
        ct, aco = weakened.pattern("C-T"), weakened.pattern("A-Co")
        span = mi(ct.positive, aco.positive)[0]
        ctaco = s_deduce(ct, aco, span, "C-T.A-Co")  # C = square, Q = Q(A-Co)
        span2 = mi(ctaco.positive, ctaco.positive)[0]
        derived = c_deduce(ctaco, ctaco, span2, "self")
        assert derived.pos_pre == derived.positive  # full overlap glues all

    def test_different_preconditions_union(self, ab_metamodel):
        qq = triple(graph({"a1": "A", "a2": "A"}),
                    graph({"b1": "B"}), [("c1", "rel", "a1", "b1")])
        pa = Pattern("pa", "C", qq.subtriple_by_ids({"a1"}), qq)
        pb = Pattern("pb", "C", qq.subtriple_by_ids({"a2"}), qq)
        span = mi(qq, qq)[0]
        derived = c_deduce(pa, pb, span, "pa.pb")
        assert derived.pos_pre == derived.positive  # M alone covers Q here

    def test_smaller_overlap_keeps_both_pre_parts(self, ab_metamodel):
        q1 = triple(graph({"a1": "A"}), graph({"b1": "B"}),
                    [("c1", "rel", "a1", "b1")])
        q2 = triple(graph({"a1": "A"}), graph({"b1": "B", "b2": "B"}),
                    [("c1", "rel", "a1", "b1")])
        pa = Pattern("pa", "C", q1.subtriple_by_ids({"b1"}), q1)
        pb = Pattern("pb", "C", q2.subtriple_by_ids({"b2"}), q2)
        span = mi(q1, q2)[0]
        derived = c_deduce(pa, pb, span, "pa.pb")
        # precondition = overlap image plus both parent preconditions
        assert derived.pos_pre.element_ids() == {"a1", "c1", "b1", "b2"}


class TestCompletion:
    def test_already_closed(self, class2rel):
        t = q(class2rel, "A-Co2")
        assert completion(t, t) == t

    def test_one_t_node_in_aco2(self, class2rel):
        # frozen from running the closure clauses by hand: t1 pulls its
        # related class c1 and the corr; unrelated re1 and f1 join; edges
        # with both endpoints follow
        t = q(class2rel, "A-Co2")
        m = t.subtriple_by_ids({"t1"})
        got = completion(m, t)
        assert got.element_ids() == {"t1", "c1", "r1", "re1", "f1", "e1", "g1"}

    def test_strict_containment_both_ways(self, class2rel):
        t = q(class2rel, "A-Co2")
        m = t.subtriple_by_ids({"t1", "t2", "f1", "g1", "g2"})
        got = completion(m, t)
        assert t.contains(got) and got.contains(m)
        assert m.size < got.size < t.size
        assert got.element_ids() == {"c1", "c2", "re1", "e1", "e2",
                                     "r1", "r2", "t1", "t2", "f1", "g1", "g2"}

    def test_embed_argument(self, class2rel):
        t = q(class2rel, "A-Co2")
        m = t.subtriple_by_ids({"t1"})
        emb = TripleMorphism.inclusion(m, t)
        assert completion(m, t) == completion(m, t, embed=emb)

    def test_least_fixpoint(self, class2rel):
        # the result is the unique minimal closed superset: every proper
        # subset containing the seed violates some closure clause
        t = q(class2rel, "A-Co2")
        m = t.subtriple_by_ids({"t1"})
        full = completion(m, t)
        extra = sorted(full.element_ids() - m.element_ids())

        def closed(ids: set[str]) -> bool:
            related_src = {c.source for c in t.corr}
            related_tgt = {c.target for c in t.corr}
            for n in t.source.nodes:
                if n.id not in related_src and n.id not in ids:
                    return False
            for n in t.target.nodes:
                if n.id not in related_tgt and n.id not in ids:
                    return False
            for c in t.corr:
                if c.source in ids and c.target not in ids:
                    return False
                if c.target in ids and c.source not in ids:
                    return False
                if c.source in ids and c.target in ids and c.id not in ids:
                    return False
            for e in t.source.edges + t.target.edges:
                if e.src in ids and e.tgt in ids and e.id not in ids:
                    return False
            return True

        assert closed(full.element_ids())
        for r in range(len(extra)):
            for subset in itertools.combinations(extra, r):
                assert not closed(m.element_ids() | set(subset)), subset


class TestNDeduce:
    def test_aco2_gains_exactly_one_post(self, weakened):
        aco2 = weakened.pattern("A-Co2")
        ndf = weakened.pattern("notDupF")
        out = n_deduce(aco2, ndf)
        assert len(out.neg_post) == 1
        post = out.neg_post[0][1]
        assert sorted(n.type for n in post.target.nodes) == ["Co", "F", "F", "T", "T"]

    def test_disjoint_types_unchanged(self, ab_metamodel):
        p = Pattern("p", "S", positive=triple(graph({"a1": "A"})))
        np = n_pattern("n", triple(None, graph({"b1": "B", "b2": "B"})))
        assert n_deduce(p, np) == p

    def test_ct_gains_post_through_shared_table(self, weakened):
        # the single table is a maximal overlap with the forbidden graph, so
        # a postcondition is transferred even without an F in the pattern
        ct = weakened.pattern("C-T")
        out = n_deduce(ct, weakened.pattern("notDupF"))
        assert len(out.neg_post) == 1


class TestDecompositions:
    def test_two_bs(self):
        s = triple(None, graph({"b1": "B", "b2": "B"}))
        ds = decompositions(s)
        assert len(ds) == 1
        assert {n.id for n in ds[0][0].target.nodes} in ({"b1"}, {"b2"})

    def test_single_node_has_none(self):
        assert decompositions(triple(None, graph({"b1": "B"}))) == []

    def test_notdupf(self, class2rel):
        s = class2rel.pattern("notDupF").forbidden
        ds = decompositions(s)
        halves = [d for d in ds
                  if sorted(n.type for n in d[0].target.nodes) == ["F", "T", "T"]
                  and len(d[0].target.edges) == 2]
        assert halves


class TestNpDeduce:
    def test_toy_reuse_pattern(self):
        toy = load_spec("toy_nonfip")
        p = toy.pattern("A-KB")
        np = toy.pattern("notDupB")
        derived = np_deduce(p, np)
        assert derived is not None
        assert derived.pos_pre.element_ids() == {"b1"}
        assert derived.positive == p.positive

    def test_single_node_forbidden_absent(self):
        toy = load_spec("toy_nonfip")
        p = toy.pattern("A-KB")
        np = n_pattern("oneB", triple(None, graph({"b1": "B"})))
        assert np_deduce(p, np) is None

    def test_aco2_notdupf_reuses_two_ts_one_f(self, weakened):
        derived = np_deduce(weakened.pattern("A-Co2"), weakened.pattern("notDupF"))
        assert derived is not None
        pre = derived.pos_pre
        assert sorted(n.type for n in pre.target.nodes) == ["F", "T", "T"]
        assert {n.id for n in pre.target.nodes} == {"t1", "t2", "f1"}
        # completion context: classes, relation node, corrs, relation edges
        assert {n.id for n in pre.source.nodes} == {"c1", "c2", "re1"}
        assert {c.id for c in pre.corr} == {"r1", "r2"}

    def test_np_annotate(self, weakened):
        a = AnnotatedPattern(weakened.pattern("A-Co2"))
        an = AnnotatedPattern(weakened.pattern("notDupF"))
        out = np_annotate(a, an)
        assert len(out) == 3
        annotated, n_unchanged, derived = out
        assert len(annotated.deps) == 1
        assert n_unchanged.pattern == an.pattern
        assert derived.pattern.name == "A-Co2.notDupF"

    def test_np_annotate_no_decomposition(self, ab_metamodel):
        p = Pattern("p", "S", positive=triple(graph({"a1": "A"})))
        np = n_pattern("n", triple(None, graph({"b1": "B"})))
        out = np_annotate(AnnotatedPattern(p), AnnotatedPattern(np))
        assert len(out) == 2


class TestCnpDeduce:
    def test_empty_pre_equals_np(self, weakened):
        p = weakened.pattern("A-Co2")
        np = weakened.pattern("notDupF")
        assert cnp_deduce(p, np) == np_deduce(p, np)

    def test_pre_isomorphic_to_completion(self, weakened):
        base = np_deduce(weakened.pattern("A-Co2"), weakened.pattern("notDupF"))
        again = cnp_deduce(base, weakened.pattern("notDupF"))
        assert again is not None
        assert again.pos_pre == base.pos_pre

    def test_pre_glued_with_completion(self, weakened, class2rel):
        # a C-pattern whose precondition is the class/table square: the
        # derived precondition glues the square with the reused structure
        ct, aco2 = weakened.pattern("C-T"), weakened.pattern("A-Co2")
        span = mi(ct.positive, aco2.positive)[0]
        ctaco2 = s_deduce(ct, aco2, span, "C-T.A-Co2")
        derived = cnp_deduce(ctaco2, weakened.pattern("notDupF"))
        assert derived is not None
        assert ctaco2.pos_pre.element_ids() <= derived.pos_pre.element_ids()
        assert {"t1", "t2", "f1"} <= derived.pos_pre.element_ids()


class TestPipeline:
    def test_class2rel_ten_patterns(self, class2rel):
        annotated = run_deduction_pipeline(class2rel)
        assert len(annotated) == 10
        names = [a.pattern.name for a in annotated]
        assert names == ["C-T", "A-Co", "A-Co2", "C-T.C-T", "C-T.A-Co",
                         "C-T.A-Co2", "A-Co.A-Co", "A-Co.A-Co2",
                         "A-Co2.A-Co2", "A-Co2.notDupF"]

    def test_single_pattern_self_gluing_only(self, ab_metamodel):
        p = Pattern("p", "S", positive=triple(
            graph({"a1": "A"}), graph({"b1": "B"}), [("c1", "rel", "a1", "b1")]))
        spec = Specification(ab_metamodel, (p,))
        out = run_deduction_pipeline(spec)
        assert [a.pattern.name for a in out] == ["p", "p.p"]
        assert out[1].pattern.pos_pre == out[1].pattern.positive

    def test_empty_spec(self, ab_metamodel):
        assert run_deduction_pipeline(Specification(ab_metamodel, ())) == []

    def test_n_patterns_removed_posts_transferred(self, class2rel):
        annotated = run_deduction_pipeline(class2rel)
        assert all(a.pattern.kind != "N" for a in annotated)
        assert all(a.pattern.neg_post for a in annotated)

    def test_derived_inherit_parent_deps_filtered(self, class2rel):
        annotated = run_deduction_pipeline(class2rel)
        by_name = {a.pattern.name: a for a in annotated}
        reuse = by_name["A-Co2.notDupF"]
        # none of its deps is included in its positive precondition
        pre_ids = reuse.pattern.pos_pre.element_ids()
        for dep in reuse.deps:
            assert not dep.embed.image_ids() <= pre_ids

    def test_determinism(self, class2rel):
        a1 = run_deduction_pipeline(class2rel)
        a2 = run_deduction_pipeline(class2rel)
        assert [x.pattern for x in a1] == [x.pattern for x in a2]
        assert [[d.name for d in x.deps] for x in a1] == \
            [[d.name for d in x.deps] for x in a2]

    def test_invalid_spec_rejected(self, ab_metamodel):
        qq = triple(graph({"a1": "A"}), graph({"b1": "B"}),
                    [("c1", "rel", "a1", "b1")])
        post = TripleGraph(qq.source, Graph.build({"b1": "B", "b2": "B"}), qq.corr)
        bad = Specification(ab_metamodel, (
            Pattern("p", "S", positive=qq, neg_post=(("x", post),)),))
        with pytest.raises(Exception):
            run_deduction_pipeline(bad)


class TestSemanticsPreservation:
    def test_s_deduction_preserves_satisfaction(self, ab_metamodel):
        # brute-force host enumeration over the two-type metamodel
        from oracles import enumerate_hosts
        q1 = triple(graph({"a1": "A"}), graph({"b1": "B"}),
                    [("c1", "rel", "a1", "b1")])
        q2 = triple(graph({"a1": "A", "a2": "A"}), graph({"b1": "B"}),
                    [("c1", "rel", "a1", "b1")])
        p1 = Pattern("p1", "S", positive=q1)
        p2 = Pattern("p2", "S", positive=q2)
        before = Specification(ab_metamodel, (p1, p2))
        extra = tuple(s_deduce(p1, p2, span, f"d{i}")
                      for i, span in enumerate(mi(q1, q2)))
        assert extra
        after = Specification(ab_metamodel, (p1, p2) + extra)
        for na, nb, pairs in enumerate_hosts(2, 2, 2):
            host = ab_triple(na, nb, pairs)
            assert check_spec(host, before).satisfied == \
                check_spec(host, after).satisfied, (na, nb, pairs)
