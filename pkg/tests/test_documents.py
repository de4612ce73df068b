from __future__ import annotations

import pytest

from tripat import documents as docs
from tripat.fixtures import load_source, load_spec, load_triple
from tripat.patterns import check_spec
from tripat.rules import generate_rules


@pytest.fixture(scope="module")
def class2rel():
    return load_spec("class2rel")


class TestParseSpec:
    def test_class2rel_has_four_patterns(self, class2rel):
        assert [p.name for p in class2rel.patterns] == \
            ["C-T", "A-Co", "A-Co2", "notDupF"]
        assert class2rel.pattern("notDupF").kind == "N"

    def test_s_pattern_with_neg_post_rejected(self):
        text = """
metamodel:
  source: {nodes: [A]}
  target: {nodes: [B]}
patterns:
  - name: bad
    kind: S
    positive: {source: {nodes: {a1: A}}}
    neg_post:
      - name: x
        graph: {source: {nodes: {a1: A, a2: A}}}
"""
        with pytest.raises(docs.DocumentError) as err:
            docs.parse_spec(text)
        assert "only N-patterns" in str(err.value)

    def test_condition_missing_positive_id_rejected(self):
        text = """
metamodel:
  source: {nodes: [A]}
  target: {nodes: [B]}
patterns:
  - name: bad
    kind: S
    positive: {source: {nodes: {a1: A, a2: A}}}
    neg_pre:
      - name: broken
        graph: {source: {nodes: {a1: A}}}
"""
        with pytest.raises(docs.DocumentError) as err:
            docs.parse_spec(text)
        assert "bad" in str(err.value)

    def test_syntax_error_position(self):
        with pytest.raises(docs.DocumentError) as err:
            docs.parse_spec("metamodel: [unbalanced")
        assert "YAML" in str(err.value)

    def test_unknown_type_rejected(self):
        text = """
metamodel:
  source: {nodes: [A]}
  target: {nodes: [B]}
patterns:
  - name: bad
    kind: S
    positive: {source: {nodes: {x1: Zebra}}}
"""
        with pytest.raises(docs.DocumentError):
            docs.parse_spec(text)


class TestRoundTrips:
    def test_spec(self, class2rel):
        assert docs.parse_spec(docs.serialize_spec(class2rel)) == class2rel

    def test_model(self):
        model = load_source("rel_classes")
        assert docs.parse_model(docs.serialize_model(model)) == model

    def test_triple(self, class2rel):
        host = load_triple("fig3_host")
        assert docs.parse_triple(docs.serialize_triple(host),
                                 class2rel.metamodel) == host

    def test_rules(self, class2rel):
        rules = generate_rules(class2rel, "forward")
        parsed = docs.parse_rules(docs.serialize_rules(rules))
        assert parsed == rules

    def test_report(self, class2rel):
        host = load_triple("fig3_host")
        report = check_spec(host, class2rel)
        assert docs.parse_report(docs.serialize_report(report)) == report

    def test_analysis_doc_stable(self, class2rel):
        from tripat.analysis import analyze
        import yaml
        text = docs.serialize_analysis(analyze(class2rel))
        assert yaml.safe_load(text) == yaml.safe_load(text)

    def test_triple_typecheck_on_parse(self, class2rel):
        with pytest.raises(docs.DocumentError):
            docs.parse_triple("source: {nodes: {x: Zebra}}", class2rel.metamodel)

    def test_annotated_serialization(self, class2rel):
        from tripat.deduction import run_deduction_pipeline
        import yaml
        annotated = run_deduction_pipeline(class2rel)
        doc = yaml.safe_load(docs.serialize_annotated(annotated))
        assert len(doc["patterns"]) == 10
        by_name = {p["name"]: p for p in doc["patterns"]}
        assert by_name["A-Co2.notDupF"]["parents"] == ["A-Co2", "notDupF"]
