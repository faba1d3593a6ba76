# coding=utf-8
import numpy as np
import pytest

from lib.exceptions import AnnotationError, ConfigError, ScoringError
from lib.models.pattern import DEFAULT_SCHEME, Pattern, PatternDictionary
from lib.models.relation_instance import NO_RELATION, RelationInstance
from lib.models.trigger_lexicon import TriggerLexicon
from lib.repattern import (
    TRANSFORMED_SCHEME,
    Setting,
    evaluate_setting,
    example_outcomes,
    extract_pattern,
    extract_patterns,
    find_triggers,
    predict,
    predict_ensemble,
    score,
    train,
    vote,
)
from lib.transforms import transform_predicate
from tests.conftest import corpus_instance, make_instance, random_sentence, relation_corpus

FOUNDED = 'PERSON < nsubj "founded" > obj ORGANIZATION'
MET = "PERSON < nsubj > obj PERSON"


def transformed(instance: RelationInstance) -> RelationInstance:
    return instance.with_parse(transform_predicate(instance.parse, set()))


def confusion(correct, wrong_label, false_positive, missed, true_negative):
    """Prediction and gold maps with the given outcome counts."""
    predictions, golds = {}, {}
    groups = [
        (correct, "rel", "rel"),
        (wrong_label, "other", "rel"),
        (false_positive, "rel", NO_RELATION),
        (missed, NO_RELATION, "rel"),
        (true_negative, NO_RELATION, NO_RELATION),
    ]
    for group, (count, predicted, gold) in enumerate(groups):
        for index in range(count):
            predictions[f"g{group}-{index}"] = predicted
            golds[f"g{group}-{index}"] = gold
    return predictions, golds


class TestRelationInstance:
    def test_spans_and_origin(self):
        instance = corpus_instance(5, "founded")
        assert instance.subj_ids == {1}
        assert instance.origin == "s2"
        assert make_instance([("a", "NOUN", 0, "root"), ("b", "NOUN", 1, "dep")], (1, 1), (2, 2)).origin == "e1"

    @pytest.mark.parametrize("subj_span, obj_span", [((0, 1), (2, 2)), ((1, 2), (2, 3)), ((3, 4), (1, 1))])
    def test_invalid_spans(self, subj_span, obj_span):
        rows = [("a", "NOUN", 0, "root"), ("b", "NOUN", 1, "dep"), ("c", "NOUN", 1, "dep")]
        with pytest.raises(AnnotationError):
            make_instance(rows, subj_span, obj_span)

    def test_parse_must_match_tokens(self):
        instance = corpus_instance(0, "founded")
        with pytest.raises(AnnotationError, match="parse tokens"):
            RelationInstance(**{**instance.__dict__, "tokens": ("x", "founded", "O0")})

    def test_from_dict_accepts_zero_based_spans(self):
        instance = corpus_instance(0, "founded")
        record = {
            "id": "i0",
            "tokens": list(instance.tokens),
            "subj_start": 0,
            "subj_end": 0,
            "obj_start": 2,
            "obj_end": 2,
            "subj_type": "PERSON",
            "obj_type": "ORGANIZATION",
            "relation": "org:founded_by",
            "source_id": "s0",
        }
        assert RelationInstance.from_dict(record, instance.parse) == instance
        assert RelationInstance.from_dict(instance.to_dict(), instance.parse) == instance

    def test_from_dict_missing_field(self):
        instance = corpus_instance(0, "founded")
        with pytest.raises(AnnotationError, match="subj_type"):
            RelationInstance.from_dict({"id": "i0", "tokens": list(instance.tokens), "subj_span": [1, 1], "obj_span": [3, 3]}, instance.parse)


class TestTriggers:
    def test_form_and_lemma_match_case_insensitively(self, build_sentence):
        lexicon = TriggerLexicon({"residence": {"live"}, "founded": {"Founded"}})
        sentence = build_sentence([("Ann", "PROPN", 2, "nsubj"), ("FOUNDED", "VERB", 0, "root"), ("lives", "VERB", 2, "conj", "live")])
        assert lexicon.match(sentence.token(2)) == ("founded",)
        assert lexicon.match(sentence.token(3)) == ("residence",)
        assert lexicon.match(sentence.token(1)) == ()

    def test_multiword_entries_never_fire(self, lexicon):
        instance = make_instance(
            [("Ann", "PROPN", 2, "nsubj"), ("works", "VERB", 0, "root"), ("for", "ADP", 4, "case"), ("Acme", "PROPN", 2, "obl")],
            (1, 1),
            (4, 4),
        )
        assert find_triggers(instance, lexicon) == [(2, "employ")]

    def test_entity_tokens_are_not_triggers(self, lexicon):
        instance = make_instance(
            [("Lives", "PROPN", 2, "nsubj"), ("founded", "VERB", 0, "root"), ("Acme", "PROPN", 2, "obj")],
            (1, 1),
            (3, 3),
        )
        assert find_triggers(instance, lexicon) == [(2, "founded")]

    def test_lexicon_rows(self, lexicon):
        assert len(lexicon) == 3
        assert TriggerLexicon.from_rows(lexicon.to_rows()) == lexicon
        with pytest.raises(ValueError):
            TriggerLexicon({"": {"x"}})
        with pytest.raises(ValueError):
            TriggerLexicon({"t": {" "}})


class TestExtractPattern:
    def test_trigger_anchored(self, lexicon):
        assert extract_pattern(corpus_instance(0, "founded"), lexicon).render() == FOUNDED

    def test_falls_back_to_the_entity_path(self, lexicon):
        pattern = extract_pattern(corpus_instance(6, "met"), lexicon)
        assert pattern.render() == MET
        assert pattern.trigger_type is None

    def test_shortest_then_leftmost_trigger(self):
        """Equal routes go to the leftmost trigger even if its type sorts later."""
        rows = [
            ("Ann", "PROPN", 3, "nsubj"),
            ("still", "ADV", 3, "advmod"),
            ("runs", "VERB", 0, "root"),
            ("again", "ADV", 3, "advmod"),
            ("Acme", "PROPN", 3, "obj"),
        ]
        instance = make_instance(rows, (1, 1), (5, 5))
        lexicon = TriggerLexicon({"t_b": {"still"}, "t_a": {"again"}})
        assert extract_pattern(instance, lexicon).render() == (
            'PERSON < nsubj > advmod "t_b" < advmod > obj ORGANIZATION'
        )
        lexicon = TriggerLexicon({"t_b": {"still"}, "t_a": {"again"}, "t_c": {"runs"}})
        assert extract_pattern(instance, lexicon).render() == 'PERSON < nsubj "t_c" > obj ORGANIZATION'

    def test_one_token_two_types(self):
        instance = corpus_instance(0, "founded")
        lexicon = TriggerLexicon({"zeta": {"founded"}, "alpha": {"founded"}})
        assert extract_pattern(instance, lexicon).trigger_type == "alpha"

    def test_trigger_free_companion(self, lexicon):
        patterns = extract_patterns(corpus_instance(0, "founded"), lexicon, include_trigger_free=True)
        assert [p.render() for p in patterns] == [FOUNDED, "PERSON < nsubj > obj ORGANIZATION"]
        assert len(extract_patterns(corpus_instance(6, "met"), lexicon, include_trigger_free=True)) == 1

    def test_total_on_random_trees(self, lexicon):
        """Trees are connected, so every instance gets a pattern that survives a round trip."""
        rng = np.random.default_rng(17)
        for index in range(300):
            sentence = random_sentence(rng, f"x{index}", 2, 10)
            rows = [(t.form, t.upos, t.head, str(t.deprel)) for t in sentence.tokens]
            split = int(rng.integers(1, len(rows)))
            instance = make_instance(rows, (1, split), (split + 1, len(rows)), instance_id=f"x{index}")
            pattern = extract_pattern(instance, lexicon)
            assert pattern is not None
            assert Pattern.parse(pattern.render()) == pattern


class TestTrainAndPredict:
    def test_counts(self, lexicon):
        instances = [corpus_instance(0, "founded"), corpus_instance(1, "founded"), corpus_instance(6, "met")]
        dictionary = train(instances, lexicon)
        assert dictionary.lookup(FOUNDED) == {"org:founded_by": 2}
        assert dictionary.lookup(MET) == {NO_RELATION: 1}
        assert train(instances, lexicon, count_negatives=False).lookup(MET) == {}

    def test_training_needs_gold(self, lexicon):
        instance = make_instance([("a", "NOUN", 0, "root"), ("b", "NOUN", 1, "dep")], (1, 1), (2, 2))
        with pytest.raises(ScoringError, match="e1"):
            train([instance], lexicon)

    def test_vote_tie_breaks(self):
        """Ties go to the more frequent relation overall, then to the smaller name."""
        assert vote({"relA": 3, "relB": 3}, {"relA": 10, "relB": 7}) == "relA"
        assert vote({"relA": 3, "relB": 3}, {"relA": 7, "relB": 10}) == "relB"
        assert vote({"relB": 2, "relA": 2}, {}) == "relA"
        assert vote({}, {"relA": 1}) == NO_RELATION

    def test_unseen_pattern(self, lexicon):
        dictionary = train([corpus_instance(0, "founded")], lexicon)
        assert predict(corpus_instance(4, "residence"), dictionary, lexicon) == NO_RELATION
        assert predict(corpus_instance(1, "founded"), dictionary, lexicon) == "org:founded_by"

    def test_predict_is_deterministic(self, lexicon):
        train_set, test_set = relation_corpus()
        first = train(train_set, lexicon)
        second = train(list(reversed(train_set)), lexicon)
        assert first == second
        assert [predict(i, first, lexicon) for i in test_set] == [predict(i, second, lexicon) for i in test_set]


class TestEnsemble:
    def test_falls_back_on_either_parse(self, lexicon):
        vanilla = corpus_instance(0, "founded")
        dictionary = PatternDictionary()
        dictionary.add(FOUNDED, "relA", DEFAULT_SCHEME, 4)
        assert predict_ensemble(vanilla, transformed(vanilla), dictionary, lexicon, DEFAULT_SCHEME, TRANSFORMED_SCHEME) == "relA"

    def test_same_parse_matches_single_predict(self, lexicon):
        train_set, test_set = relation_corpus()
        dictionary = train(train_set, lexicon)
        for instance in test_set:
            assert predict_ensemble(instance, instance, dictionary, lexicon) == predict(instance, dictionary, lexicon)

    def test_positive_vote_survives_pooling(self, lexicon):
        """A relation found by one parse is kept even when pooled negatives outnumber it."""
        vanilla = corpus_instance(0, "founded")
        variant = transformed(vanilla)
        dictionary = PatternDictionary()
        dictionary.add(FOUNDED, NO_RELATION, DEFAULT_SCHEME, 5)
        dictionary.add(extract_pattern(variant, lexicon), "relB", TRANSFORMED_SCHEME, 1)
        assert predict(vanilla, dictionary, lexicon, DEFAULT_SCHEME) == NO_RELATION
        assert predict(variant, dictionary, lexicon, TRANSFORMED_SCHEME) == "relB"
        assert predict_ensemble(vanilla, variant, dictionary, lexicon, DEFAULT_SCHEME, TRANSFORMED_SCHEME) == "relB"

    def test_different_examples(self, lexicon):
        with pytest.raises(ScoringError):
            predict_ensemble(corpus_instance(0, "founded"), corpus_instance(1, "founded"), PatternDictionary(), lexicon)

    def test_never_loses_a_positive(self, lexicon):
        """Over random dictionaries the ensemble returns a relation whenever either parse alone does."""
        vanilla = corpus_instance(0, "founded")
        variant = transformed(vanilla)
        keys = {DEFAULT_SCHEME: FOUNDED, TRANSFORMED_SCHEME: extract_pattern(variant, lexicon).render()}
        relations = ("relA", "relB", NO_RELATION)
        rng = np.random.default_rng(13)
        violations = 0
        for _draw in range(1000):
            dictionary = PatternDictionary()
            for scheme, key in keys.items():
                for pattern in (key, MET):
                    for relation in relations:
                        count = int(rng.integers(0, 4))
                        if count:
                            dictionary.add(pattern, relation, scheme, count)
            singles = (
                predict(vanilla, dictionary, lexicon, DEFAULT_SCHEME),
                predict(variant, dictionary, lexicon, TRANSFORMED_SCHEME),
            )
            ensemble = predict_ensemble(vanilla, variant, dictionary, lexicon, DEFAULT_SCHEME, TRANSFORMED_SCHEME)
            if any(single != NO_RELATION for single in singles) and ensemble == NO_RELATION:
                violations += 1
        assert violations == 0


class TestScore:
    @pytest.mark.parametrize(
        "counts, expected",
        [
            ((6, 0, 2, 14, 0), (0.75, 0.3, 6 / 14)),
            ((1, 0, 0, 0, 0), (1.0, 1.0, 1.0)),
            ((0, 0, 0, 0, 5), (0.0, 0.0, 0.0)),
            ((0, 0, 3, 0, 2), (0.0, 0.0, 0.0)),
            ((0, 0, 0, 4, 1), (0.0, 0.0, 0.0)),
            ((2, 2, 0, 0, 0), (0.5, 0.5, 0.5)),
            ((3, 1, 1, 5, 10), (0.6, 1 / 3, 6 / 14)),
            ((5, 0, 5, 0, 0), (0.5, 1.0, 2 / 3)),
            ((4, 0, 0, 4, 0), (1.0, 0.5, 2 / 3)),
            ((7, 2, 1, 3, 20), (0.7, 7 / 12, 14 / 22)),
        ],
    )
    def test_confusions(self, counts, expected):
        scores = score(*confusion(*counts))
        assert (scores.precision, scores.recall, scores.f1) == pytest.approx(expected, abs=1e-9)
        assert (scores.f1 == 0) == (scores.correct == 0)

    def test_ids_must_match(self):
        with pytest.raises(ScoringError, match="1 missing"):
            score({"a": "rel"}, {"a": "rel", "b": NO_RELATION})

    def test_example_outcomes(self):
        predictions, golds = confusion(1, 1, 1, 1, 1)
        ids, rows = example_outcomes(predictions, golds)
        assert ids == sorted(golds)
        assert rows.tolist() == [[1, 1, 1], [1, 1, 0], [1, 0, 0], [0, 1, 0], [0, 0, 0]]


class TestEvaluateSetting:
    def test_parallel_memorizes(self, lexicon):
        train_set, test_set = relation_corpus()
        result = evaluate_setting(train_set, test_set, Setting.PARALLEL, lexicon)
        assert (result.scores.precision, result.scores.recall, result.scores.f1) == (1.0, 1.0, 1.0)
        assert result.n_train == 40

    def test_standard_drops_test_sources(self, lexicon):
        """Without the test sources the residence pattern is never seen: 6 of 8 positives found."""
        train_set, test_set = relation_corpus()
        result = evaluate_setting(train_set, test_set, "standard", lexicon)
        assert result.n_train == 30
        assert result.predictions["i4"] == NO_RELATION
        assert (result.scores.predicted_positive, result.scores.gold_positive, result.scores.correct) == (6, 8, 6)
        assert result.scores.f1 == pytest.approx(6 / 7)
        assert result.to_dict()["n_test"] == 10

    def test_standard_with_explicit_exclusions(self, lexicon):
        train_set, test_set = relation_corpus()
        result = evaluate_setting(train_set, test_set, "standard", lexicon, excluded_sources=["s0"])
        assert result.n_train == 38
        assert result.scores.f1 == 1.0

    def test_disjoint_corpus_scores_zero(self, lexicon):
        train_set, _test_set = relation_corpus()
        test_set = [corpus_instance(index, "residence") for index in range(2)]
        result = evaluate_setting(train_set[10:], test_set, "standard", lexicon)
        assert result.scores.f1 == 0.0

    def test_ensemble(self, lexicon):
        train_set, test_set = relation_corpus()
        result = evaluate_setting(
            train_set,
            test_set,
            "ensemble",
            lexicon,
            train_variant=[transformed(i) for i in train_set],
            test_variant=[transformed(i) for i in test_set],
        )
        assert result.dictionary.schemes == [TRANSFORMED_SCHEME, DEFAULT_SCHEME]
        assert result.scores.f1 == pytest.approx(6 / 7)
        assert result.n_train == 30

    def test_ensemble_needs_variants(self, lexicon):
        train_set, test_set = relation_corpus()
        with pytest.raises(ConfigError):
            evaluate_setting(train_set, test_set, "ensemble", lexicon)
        with pytest.raises(ConfigError, match="test"):
            evaluate_setting(
                train_set,
                test_set,
                "ensemble",
                lexicon,
                train_variant=[transformed(i) for i in train_set],
                test_variant=[transformed(i) for i in test_set[1:]],
            )
