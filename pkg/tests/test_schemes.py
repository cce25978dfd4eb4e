import itertools
import random

import pytest
from hypothesis import given, strategies as st

from argudas.errors import (
    DisabledScheme,
    DuplicateSchemeId,
    EmptyCatalog,
    MalformedCondition,
    MissingScore,
    NoScores,
)
from argudas.schemes import (
    AgreementClass,
    Condition,
    ExpertScore,
    Operator,
    Polarity,
    Scheme,
    Scope,
    aggregate_confidence,
    agreement_report,
    classify_agreement,
    compile_enabled,
    compile_scheme,
    parse_scheme_catalog,
)

from conftest import make_annotation
from oracles import naive_rule_match

SYMBOLS = ["0", "?", "1", "2", "3"]


def scheme_record(scheme_id="s1", polarity="supports_expression", scores=None, **overrides):
    record = {
        "id": scheme_id,
        "description": "Test premise: if something holds, believe something else.",
        "polarity": polarity,
        "conditions": [{"field": "level", "op": "presence_is", "value": True}],
        "critical_questions": ["Really?"],
        "scores": {"curator_a": "3", "curator_b": "3"} if scores is None else scores,
    }
    record.update(overrides)
    return record


class TestParseCatalog:
    def test_single_scheme(self):
        catalog = parse_scheme_catalog([scheme_record()])
        assert len(catalog) == 1
        assert catalog[0].polarity is Polarity.SUPPORTS_EXPRESSION

    def test_duplicate_ids_rejected(self):
        with pytest.raises(DuplicateSchemeId):
            parse_scheme_catalog([scheme_record("dup"), scheme_record("dup")])

    def test_default_catalog_shape(self, default_catalog):
        assert len(default_catalog) == 12
        ids = {s.id for s in default_catalog}
        assert "probe-details-recorded" in ids
        assert "direct-annotation-trust" in ids
        assert "multi-resource-agreement" in ids
        assert all(s.conditions for s in default_catalog)

    def test_valueless_operator_with_value(self):
        with pytest.raises(MalformedCondition):
            Condition(field="technique", op=Operator.IS_SET, value=True)

    def test_valued_operator_without_value(self):
        with pytest.raises(MalformedCondition):
            Condition(field="direct", op=Operator.EQUALS)

    def test_unknown_field(self):
        with pytest.raises(MalformedCondition):
            Condition(field="mood", op=Operator.IS_SET)

    def test_pair_predicate_needs_pair_scope(self):
        with pytest.raises(MalformedCondition):
            Scheme(
                id="s",
                description="d",
                polarity=Polarity.SUPPORTS_EXPRESSION,
                conditions=(Condition("pair.same_subject", Operator.EQUALS, True),),
            )

    def test_pair_scope_rejects_trust_polarity(self):
        with pytest.raises(MalformedCondition):
            Scheme(
                id="s",
                description="d",
                polarity=Polarity.WEAKENS_ANNOTATION,
                scope=Scope.PAIR,
                conditions=(Condition("pair.same_subject", Operator.EQUALS, True),),
            )

    def test_empty_conditions_rejected(self):
        with pytest.raises(MalformedCondition):
            parse_scheme_catalog([scheme_record(conditions=[])])


class TestClassifyAgreement:
    def test_examples(self):
        two = ExpertScore.TWO
        assert classify_agreement(two, two) is AgreementClass.EXACT
        assert classify_agreement(two, ExpertScore.ONE) is AgreementClass.SIMILAR
        assert classify_agreement(two, ExpertScore.THREE) is AgreementClass.SIMILAR
        assert classify_agreement(ExpertScore.THREE, ExpertScore.ZERO) is AgreementClass.DISAGREE

    def test_unsure_is_adjacent_to_zero(self):
        assert classify_agreement(ExpertScore.ZERO, ExpertScore.UNSURE) is AgreementClass.SIMILAR

    def test_symmetric_over_all_pairs(self):
        for s1, s2 in itertools.product(ExpertScore, repeat=2):
            assert classify_agreement(s1, s2) is classify_agreement(s2, s1)

    def test_ordinal_embedding(self):
        assert [s.ordinal for s in ExpertScore] == [0, 1, 2, 3, 4]
        assert [s.symbol for s in ExpertScore] == SYMBOLS


class TestAgreementReport:
    def test_single_scheme_exact(self):
        catalog = parse_scheme_catalog(
            [scheme_record(scores={"a": "1", "b": "1"})]
        )
        report = agreement_report(catalog, "a", "b")
        assert report == (1, 0, 0, 1.0)

    def test_counts_partition_catalog(self, review_catalog):
        report = agreement_report(review_catalog, "curator_a", "curator_b")
        assert report.exact + report.similar + report.disagree == len(review_catalog)

    def test_review_fixture_totals(self, review_catalog):
        report = agreement_report(review_catalog, "curator_a", "curator_b")
        assert (report.exact, report.similar, report.disagree) == (16, 33, 19)
        assert report.broad_agreement == pytest.approx(49 / 68)

    def test_missing_score_lists_ids(self):
        catalog = parse_scheme_catalog(
            [scheme_record("sA"), scheme_record("sB", scores={"curator_a": "2"})]
        )
        with pytest.raises(MissingScore) as err:
            agreement_report(catalog, "curator_a", "curator_b")
        assert err.value.scheme_ids == ["sB"]

    def test_empty_catalog(self):
        with pytest.raises(EmptyCatalog):
            agreement_report([], "a", "b")


class TestAggregateConfidence:
    def test_half_rounds_up(self):
        scores = {"a": ExpertScore.TWO, "b": ExpertScore.ONE}  # ordinals 3, 2
        assert aggregate_confidence(scores) == (3, True)

    def test_single_rejection_disables(self):
        assert aggregate_confidence({"a": ExpertScore.ZERO}) == (0, False)

    def test_unanimous_maximum(self):
        scores = {"a": ExpertScore.THREE, "b": ExpertScore.THREE}
        assert aggregate_confidence(scores) == (4, True)

    def test_no_scores(self):
        with pytest.raises(NoScores):
            aggregate_confidence({})

    @given(st.lists(st.sampled_from(SYMBOLS), min_size=1, max_size=6))
    def test_permutation_invariant(self, symbols):
        scores = {f"e{i}": ExpertScore.from_symbol(s) for i, s in enumerate(symbols)}
        rotated = {f"e{(i + 1) % len(symbols)}": score for i, (_, score) in enumerate(scores.items())}
        assert aggregate_confidence(scores) == aggregate_confidence(rotated)

    @given(
        st.lists(st.sampled_from(SYMBOLS), min_size=1, max_size=6),
        st.integers(min_value=0, max_value=5),
    )
    def test_monotone_in_each_score(self, symbols, which):
        which %= len(symbols)
        scores = {f"e{i}": ExpertScore.from_symbol(s) for i, s in enumerate(symbols)}
        base = aggregate_confidence(scores).ordinal
        current = scores[f"e{which}"]
        for higher in ExpertScore:
            if higher.ordinal > current.ordinal:
                raised = dict(scores)
                raised[f"e{which}"] = higher
                assert aggregate_confidence(raised).ordinal >= base


class TestCompile:
    def test_probe_scheme_matches_probe_annotations(self, default_catalog):
        probe_scheme = next(s for s in default_catalog if s.id == "probe-details-recorded")
        rule = compile_scheme(probe_scheme)
        assert rule.polarity is Polarity.STRENGTHENS_ANNOTATION
        assert rule.matches(make_annotation(probe_info=True))
        assert not rule.matches(make_annotation(probe_info=None))

    def test_presence_rule(self):
        catalog = parse_scheme_catalog([scheme_record()])
        rule = compile_scheme(catalog[0])
        assert rule.matches(make_annotation(level="weak"))
        assert not rule.matches(make_annotation(level="not detected"))

    def test_disabled_scheme_rejected(self):
        catalog = parse_scheme_catalog(
            [scheme_record(scores={"curator_a": "0", "curator_b": "0"})]
        )
        with pytest.raises(DisabledScheme):
            compile_scheme(catalog[0])

    def test_compile_enabled_skips_disabled_and_unscored(self):
        catalog = parse_scheme_catalog(
            [
                scheme_record("on"),
                scheme_record("off", scores={"curator_a": "0"}),
                scheme_record("unscored", scores={}),
            ]
        )
        assert [r.scheme_id for r in compile_enabled(catalog)] == ["on"]

    def test_label_is_leading_clause(self, default_catalog):
        probe_scheme = next(s for s in default_catalog if s.id == "probe-details-recorded")
        assert probe_scheme.label == "Probe details recorded"

    def test_rule_evaluation_matches_naive_interpreter(self, default_catalog):
        rng = random.Random(23)
        rules = {r.scheme_id: r for r in compile_enabled(default_catalog)}
        records = {s.id: record for s, record in zip(default_catalog, _raw_records(default_catalog))}
        annotations = [_random_annotation(rng, i) for i in range(60)]
        for scheme_id, rule in rules.items():
            record = records[scheme_id]
            if rule.scope is Scope.SINGLE:
                for a in annotations:
                    assert rule.matches(a) == naive_rule_match(record, (a,)), scheme_id
            else:
                for a, b in itertools.combinations(annotations[:20], 2):
                    assert rule.matches_pair(a, b) == naive_rule_match(record, (a, b)), scheme_id


def _raw_records(catalog):
    from argudas.schemes import catalog_to_records

    return catalog_to_records(catalog)


def _random_annotation(rng, i):
    from argudas.model import AnnotationId, ResourceId

    direct = rng.random() < 0.7
    if direct:
        level = rng.choice(
            ["not detected", "weak", "moderate", "strong", "detected", "moderate to strong"]
        )
        derived_from = None
    else:  # propagated annotations always carry a present interval and an origin
        level = rng.choice(["weak", "moderate", "strong", "detected", "moderate to strong"])
        derived_from = AnnotationId(ResourceId.EMAGE, f"origin{i}")
    return make_annotation(
        local=f"r{i}",
        resource=rng.choice(["EMAGE", "GXD", "ABA", "GENSAT"]),
        gene=rng.choice(["bmp4", "shh"]),
        tissue=rng.choice(["future brain", "telencephalon"]),
        stage=rng.choice([14, 15]),
        level=level,
        direct=direct,
        probe_info=rng.choice([None, True, False]),
        technique=rng.choice([None, "wholemount in situ"]),
        source_url=rng.choice([None, "https://example.org/x"]),
        derived_from=derived_from,
        extra=(("precision_loss", rng.choice([True, False])),),
    )
