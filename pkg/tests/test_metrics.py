# coding=utf-8
import numpy as np
import pytest

from lib.exceptions import ScoringError
from lib.metrics import (
    aggregate_runs,
    aggregate_values,
    attachment_scores,
    corpus_metric,
    exclude_punctuation,
    normalized_difference,
    pair_treebanks,
    paired_bootstrap,
    per_category_scores,
    sentence_outcomes,
    source_label_bias,
)
from lib.models.edge_category import CATEGORY_ORDER, EdgeCategory
from lib.models.scores import AttachmentScores, CategoryScores
from lib.models.sentence import DepLabel
from lib.stability import classify_treebank
from tests.conftest import make_sentence


def star(labels=None, heads=None, sent_id="star"):
    """Twenty tokens hanging off token 1, with optional overrides per token."""
    labels = labels or {}
    heads = heads or {}
    rows = [("w1", "VERB", 0, "root")]
    for token_id in range(2, 21):
        rows.append((f"w{token_id}", "NOUN", heads.get(token_id, 1), labels.get(token_id, "obj")))
    return make_sentence(rows, sent_id)


def category_scores(fully, partially):
    scores = {category: AttachmentScores(0.5, 0.5, 10) for category in CATEGORY_ORDER}
    scores[EdgeCategory.FULLY_ALIGNED] = AttachmentScores(fully, fully, 10)
    scores[EdgeCategory.PARTIALLY_ALIGNED] = AttachmentScores(partially, partially, 10)
    return CategoryScores(scores)


class TestAttachmentScores:
    def test_twenty_tokens(self):
        """Three wrong heads and two more wrong labels give UAS 0.85 and LAS 0.75."""
        gold = star()
        predicted = star(labels={6: "nsubj", 7: "nsubj"}, heads={2: 5, 3: 5, 4: 5})
        scores = attachment_scores(pair_treebanks([gold], [predicted]))
        assert scores.n_edges == 20
        assert scores.uas == pytest.approx(0.85)
        assert scores.las == pytest.approx(0.75)

    def test_subtype_policy(self):
        gold = star(labels={2: "obl"})
        predicted = star(labels={2: "obl:tmod"})
        pairs = pair_treebanks([gold], [predicted])
        assert attachment_scores(pairs).las == 1.0
        assert attachment_scores(pairs, exact_labels=True).las == pytest.approx(0.95)

    def test_punctuation_filter(self, build_sentence):
        gold = build_sentence([("Go", "VERB", 0, "root"), ("!", "PUNCT", 1, "punct")])
        predicted = build_sentence([("Go", "VERB", 0, "root"), ("!", "PUNCT", 1, "discourse")])
        pairs = pair_treebanks([gold], [predicted])
        assert attachment_scores(pairs).las == 0.5
        assert attachment_scores(pairs, exclude_punctuation).las == 1.0

    def test_mismatched_inputs(self, erdogan_tree, japanese_company_pair):
        _src, tgt, _alignment = japanese_company_pair
        with pytest.raises(ScoringError):
            pair_treebanks([tgt], [])
        with pytest.raises(ScoringError, match="tokens differ"):
            pair_treebanks([tgt], [erdogan_tree])


class TestCategoryScores:
    def test_partially_aligned_edge(self, japanese_company_pair):
        """A parser that keeps the source label gets the head right and the label wrong."""
        src, tgt, alignment = japanese_company_pair
        predicted = tgt.with_labels({1: src.token(1).deprel})
        classification = classify_treebank([src], [tgt], [alignment])
        scores = per_category_scores(pair_treebanks([tgt], [predicted]), classification)
        partially = scores[EdgeCategory.PARTIALLY_ALIGNED]
        assert (partially.uas, partially.las, partially.n_edges) == (1.0, 0.0, 1)
        assert scores[EdgeCategory.FULLY_ALIGNED].n_edges == 0
        assert scores.total_edges == 1

    def test_missing_classification(self, japanese_company_pair):
        _src, tgt, _alignment = japanese_company_pair
        with pytest.raises(ScoringError, match="pair-1"):
            per_category_scores(pair_treebanks([tgt], [tgt]), {})

    def test_label_bias(self, japanese_company_pair):
        """Wrong labels on Partially Aligned edges are checked against the source label."""
        src, tgt, alignment = japanese_company_pair
        classification = classify_treebank([src], [tgt], [alignment])
        copied = tgt.with_labels({1: src.token(1).deprel})
        other = tgt.with_labels({1: DepLabel("nmod")})
        bias = source_label_bias(pair_treebanks([tgt], [copied]), classification, [src], [alignment])
        assert (bias.source_labeled, bias.label_errors) == (1, 1)
        assert bias.rate == 1.0
        bias = source_label_bias(pair_treebanks([tgt], [other]), classification, [src], [alignment])
        assert bias.to_dict() == {"source_labeled": 0, "label_errors": 1, "rate": 0.0}


class TestAggregation:
    def test_mean_and_population_std(self):
        aggregated = aggregate_runs([category_scores(0.8, 0.4), category_scores(0.6, 0.4)])
        cell = aggregated.cells[EdgeCategory.FULLY_ALIGNED]["uas"]
        assert cell.mean == pytest.approx(0.7)
        assert cell.std == pytest.approx(0.1)
        assert aggregated.cells[EdgeCategory.PARTIALLY_ALIGNED]["las"].std == pytest.approx(0.0)
        assert aggregated.n_runs == 2

    def test_no_runs(self):
        with pytest.raises(ScoringError):
            aggregate_runs([])
        with pytest.raises(ScoringError):
            aggregate_values([])

    def test_aggregate_values_keeps_shared_keys(self):
        result = aggregate_values([{"f1": 0.5, "precision": 0.4}, {"f1": 0.7}])
        assert list(result) == ["f1"]
        assert result["f1"].mean == pytest.approx(0.6)

    def test_normalized_difference(self):
        """Each system is divided by its own Fully Aligned score before subtracting."""
        difference = normalized_difference(category_scores(0.8, 0.4), category_scores(0.9, 0.9))
        assert difference[EdgeCategory.FULLY_ALIGNED]["uas"] == pytest.approx(0.0)
        assert difference[EdgeCategory.PARTIALLY_ALIGNED]["uas"] == pytest.approx(-0.5)

    def test_normalized_difference_of_aggregates(self):
        zero_shot = aggregate_runs([category_scores(0.8, 0.4)])
        supervised = aggregate_runs([category_scores(0.9, 0.9)])
        difference = normalized_difference(zero_shot, supervised)
        assert difference[EdgeCategory.PARTIALLY_ALIGNED]["las"] == pytest.approx(-0.5)

    def test_zero_baseline(self):
        with pytest.raises(ScoringError, match="FullyAligned"):
            normalized_difference(category_scores(0.0, 0.4), category_scores(0.9, 0.9))


class TestBootstrap:
    def test_identical_systems(self):
        """Every resample ties, so the one-sided p-value is one half."""
        outcomes = np.array([[3, 2, 5], [4, 4, 4], [1, 0, 6]] * 10)
        result = paired_bootstrap(outcomes, outcomes, metric="las", n_resamples=500)
        assert result.p_value == 0.5
        assert result.observed_delta == 0.0

    def test_dominating_system(self):
        weak = np.tile([5, 5, 10], (50, 1))
        strong = np.tile([10, 10, 10], (50, 1))
        result = paired_bootstrap(weak, strong, metric="uas", n_resamples=2000)
        assert result.p_value < 0.001
        assert result.observed_delta == pytest.approx(0.5)
        assert paired_bootstrap(strong, weak, metric="uas", n_resamples=200).p_value == 1.0

    def test_agrees_with_a_plain_resampling_loop(self):
        """14 units won by b, 6 by a and 80 ties: the p-value matches an independent loop."""
        a = np.array([[0, 0, 1]] * 14 + [[1, 1, 1]] * 6 + [[1, 1, 1]] * 80)
        b = np.array([[1, 1, 1]] * 14 + [[0, 0, 1]] * 6 + [[1, 1, 1]] * 80)
        result = paired_bootstrap(a, b, metric="uas", n_resamples=10_000, seed=3)

        rng = np.random.default_rng(12345)
        losses = 0.0
        for _ in range(10_000):
            sample = rng.choice(100, size=100, replace=True)
            delta = b[sample, 0].sum() / b[sample, 2].sum() - a[sample, 0].sum() / a[sample, 2].sum()
            losses += 1.0 if delta < 0 else 0.5 if delta == 0 else 0.0
        assert result.observed_delta == pytest.approx(0.08)
        assert 0.005 < result.p_value < 0.1
        assert result.p_value == pytest.approx(losses / 10_000, abs=0.01)

    def test_two_sided(self):
        weak = np.tile([5, 5, 10], (50, 1))
        strong = np.tile([10, 10, 10], (50, 1))
        result = paired_bootstrap(strong, weak, metric="uas", n_resamples=200, two_sided=True)
        assert result.p_value == 0.0
        assert result.two_sided

    def test_same_seed_same_p_value(self):
        rng = np.random.default_rng(1)
        a = rng.integers(0, 5, size=(40, 3))
        b = rng.integers(0, 5, size=(40, 3))
        first = paired_bootstrap(a, b, n_resamples=300, seed=4)
        second = paired_bootstrap(a, b, n_resamples=300, seed=4)
        assert first == second

    def test_unit_order_does_not_matter(self):
        """With unit ids the result is the same for any input order."""
        rng = np.random.default_rng(2)
        a = rng.integers(0, 8, size=(30, 3))
        b = rng.integers(0, 8, size=(30, 3))
        ids = [f"u{i:02d}" for i in range(30)]
        order = rng.permutation(30)
        first = paired_bootstrap(a, b, n_resamples=300, unit_ids=ids)
        second = paired_bootstrap(a[order], b[order], n_resamples=300, unit_ids=[ids[i] for i in order])
        assert first.p_value == second.p_value

    @pytest.mark.parametrize(
        "kwargs, message",
        [
            ({"metric": "bleu"}, "Unknown metric"),
            ({"seed": -1}, "non-negative"),
            ({"unit_ids": ["a"]}, "unit ids"),
        ],
    )
    def test_invalid_arguments(self, kwargs, message):
        outcomes = np.ones((3, 3), dtype=int)
        with pytest.raises(ScoringError, match=message):
            paired_bootstrap(outcomes, outcomes, n_resamples=10, **kwargs)

    def test_shape_mismatch(self):
        with pytest.raises(ScoringError, match="shapes"):
            paired_bootstrap(np.ones((3, 3)), np.ones((4, 3)), n_resamples=10)
        with pytest.raises(ScoringError, match="zero units"):
            paired_bootstrap(np.empty((0, 3)), np.empty((0, 3)), n_resamples=10)


def test_sentence_outcomes_sum_to_corpus_scores():
    """Per-sentence rows add up to the corpus scores."""
    gold = [star(sent_id="a"), star(sent_id="b")]
    predicted = [star(heads={2: 5}, sent_id="a"), star(labels={3: "iobj"}, sent_id="b")]
    pairs = pair_treebanks(gold, predicted)
    outcomes = sentence_outcomes(pairs)
    assert outcomes.tolist() == [[19, 19, 20], [20, 19, 20]]
    scores = attachment_scores(pairs)
    assert corpus_metric(outcomes, "uas") == pytest.approx(scores.uas)
    assert corpus_metric(outcomes, "las") == pytest.approx(scores.las)


def test_re_metrics_from_counts():
    """RE rows are (predicted positive, gold positive, correct)."""
    outcomes = np.array([[8, 20, 6]])
    assert corpus_metric(outcomes, "precision") == pytest.approx(0.75)
    assert corpus_metric(outcomes, "recall") == pytest.approx(0.3)
    assert corpus_metric(outcomes, "f1") == pytest.approx(0.428571, abs=1e-6)
