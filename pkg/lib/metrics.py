# coding=utf-8
"""
Attachment scores, overall and per stability category, run aggregation and
paired bootstrap significance tests.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from lib.exceptions import ScoringError
from lib.models.alignment import SentenceAlignment
from lib.models.edge_category import CATEGORY_ORDER, EdgeCategory
from lib.models.parsed_pair import ParsedPair
from lib.models.scores import (
    AggregatedCategoryScores,
    AttachmentScores,
    BootstrapResult,
    CategoryScores,
    MeanStd,
)
from lib.models.sentence import Sentence, Token
from lib.stability import TreebankClassification, pair_sentences
from lib.utils.helpers import labels_match, sentence_keys

logger = logging.getLogger(__name__)

EdgeFilter = Callable[[Sentence, Token], bool]

DEFAULT_RESAMPLES = 10_000


def exclude_punctuation(sentence: Sentence, token: Token) -> bool:
    return token.upos != "PUNCT"


def pair_treebanks(gold: Sequence[Sentence], predicted: Sequence[Sentence]) -> list[ParsedPair]:
    """
    Pair gold and predicted trees by position.
    """
    if len(gold) != len(predicted):
        raise ScoringError(
            f"Gold has {len(gold)} sentences but the prediction has {len(predicted)}"
        )
    return [ParsedPair(g, p) for g, p in zip(gold, predicted)]


def _sentence_counts(
    pair: ParsedPair, edge_filter: EdgeFilter | None, exact_labels: bool
) -> tuple[int, int, int]:
    heads = labels = total = 0
    for gold_token, predicted_token in zip(pair.gold.tokens, pair.predicted.tokens):
        if edge_filter is not None and not edge_filter(pair.gold, gold_token):
            continue
        total += 1
        if gold_token.head == predicted_token.head:
            heads += 1
            if labels_match(gold_token.deprel, predicted_token.deprel, exact_labels):
                labels += 1
    return heads, labels, total


def attachment_scores(
    pairs: Iterable[ParsedPair],
    edge_filter: EdgeFilter | None = None,
    exact_labels: bool = False,
) -> AttachmentScores:
    """
    UAS and LAS over every token that passes `edge_filter` (all tokens,
    including the root and punctuation, by default).
    """
    heads = labels = total = 0
    for pair in pairs:
        h, l, t = _sentence_counts(pair, edge_filter, exact_labels)
        heads, labels, total = heads + h, labels + l, total + t
    return _scores(heads, labels, total)


def _scores(heads: int, labels: int, total: int) -> AttachmentScores:
    if total == 0:
        return AttachmentScores(0.0, 0.0, 0)
    return AttachmentScores(heads / total, labels / total, total)


def _category_lookup(
    pairs: Sequence[ParsedPair], classification: TreebankClassification
) -> list[dict[int, EdgeCategory]]:
    """
    Per pair, the category of each gold dependent.
    """
    lookup = []
    for key, pair in zip(sentence_keys([pair.gold for pair in pairs]), pairs):
        edges = classification.get(key)
        if edges is None:
            raise ScoringError(f"No classification for sentence {key}")
        by_dependent = {edge.dep_id: (edge, category) for edge, category in edges.items()}
        categories = {}
        for gold_edge in pair.gold.edges():
            classified = by_dependent.get(gold_edge.dep_id)
            if classified is None or classified[0].head_id != gold_edge.head_id:
                raise ScoringError(
                    f"Sentence {key}: gold edge {gold_edge.head_id}->{gold_edge.dep_id} has no category"
                )
            categories[gold_edge.dep_id] = classified[1]
        lookup.append(categories)
    return lookup


def per_category_scores(
    pairs: Sequence[ParsedPair],
    classification: TreebankClassification,
    exact_labels: bool = False,
) -> CategoryScores:
    pairs = list(pairs)
    lookup = _category_lookup(pairs, classification)
    scores = {}
    for category in CATEGORY_ORDER:
        heads = labels = total = 0
        for pair, categories in zip(pairs, lookup):
            h, l, t = _sentence_counts(
                pair, lambda _sentence, token: categories.get(token.id) == category, exact_labels
            )
            heads, labels, total = heads + h, labels + l, total + t
        scores[category] = _scores(heads, labels, total)
    return CategoryScores(scores)


def aggregate_runs(runs: Sequence[CategoryScores]) -> AggregatedCategoryScores:
    """
    Mean and population standard deviation per (category, metric) cell.
    """
    if not runs:
        raise ScoringError("Need at least one run to aggregate")
    cells = {}
    for category in CATEGORY_ORDER:
        cells[category] = {}
        for metric in ("uas", "las"):
            values = np.array([getattr(run[category], metric) for run in runs], dtype=float)
            cells[category][metric] = MeanStd(float(values.mean()), float(values.std()))
    return AggregatedCategoryScores(n_runs=len(runs), cells=cells)


def aggregate_values(rows: Sequence[Mapping[str, float]]) -> dict[str, MeanStd]:
    """
    Mean and population standard deviation of every key shared by `rows`.
    """
    if not rows:
        raise ScoringError("Need at least one run to aggregate")
    keys = [key for key in rows[0] if all(key in row for row in rows)]
    result = {}
    for key in keys:
        values = np.array([row[key] for row in rows], dtype=float)
        result[key] = MeanStd(float(values.mean()), float(values.std()))
    return result


def _cell(scores, category: EdgeCategory, metric: str) -> float:
    if isinstance(scores, AggregatedCategoryScores):
        return scores.cells[category][metric].mean
    return getattr(scores[category], metric)


def normalized_difference(
    zero_shot: CategoryScores | AggregatedCategoryScores,
    supervised: CategoryScores | AggregatedCategoryScores,
) -> dict[EdgeCategory, dict[str, float]]:
    """
    Divide each category's score by the FullyAligned score of the same
    system, then subtract the supervised value from the zero-shot one.
    """
    result = {}
    for category in CATEGORY_ORDER:
        result[category] = {}
        for metric in ("uas", "las"):
            zs_base = _cell(zero_shot, EdgeCategory.FULLY_ALIGNED, metric)
            sup_base = _cell(supervised, EdgeCategory.FULLY_ALIGNED, metric)
            if zs_base == 0 or sup_base == 0:
                raise ScoringError(f"FullyAligned {metric} is zero, cannot normalize")
            result[category][metric] = (
                _cell(zero_shot, category, metric) / zs_base
                - _cell(supervised, category, metric) / sup_base
            )
    return result


@dataclass(frozen=True)
class LabelBias:
    """
    Among PartiallyAligned edges with a wrong predicted label, how many carry
    the label of the aligned source edge.
    """

    source_labeled: int
    label_errors: int

    @property
    def rate(self) -> float:
        return self.source_labeled / self.label_errors if self.label_errors else 0.0

    def to_dict(self) -> dict:
        return {
            "source_labeled": self.source_labeled,
            "label_errors": self.label_errors,
            "rate": self.rate,
        }


def source_label_bias(
    pairs: Sequence[ParsedPair],
    classification: TreebankClassification,
    src_treebank: Sequence[Sentence],
    alignments: Iterable[SentenceAlignment],
    exact_labels: bool = False,
) -> LabelBias:
    pairs = list(pairs)
    matched = pair_sentences(src_treebank, [pair.gold for pair in pairs], alignments)
    source_labeled = label_errors = 0
    for pair, (key, src, _tgt, alignment) in zip(pairs, matched):
        sources = alignment.source_map()
        for edge, category in classification.get(key, {}).items():
            if category is not EdgeCategory.PARTIALLY_ALIGNED:
                continue
            predicted_label = pair.predicted.token(edge.dep_id).deprel
            if labels_match(predicted_label, edge.label, exact_labels):
                continue
            label_errors += 1
            source_label = src.token(sources[edge.dep_id][0]).deprel
            if labels_match(predicted_label, source_label, exact_labels):
                source_labeled += 1
    return LabelBias(source_labeled, label_errors)


def sentence_outcomes(
    pairs: Iterable[ParsedPair],
    edge_filter: EdgeFilter | None = None,
    exact_labels: bool = False,
) -> np.ndarray:
    """
    Rows of (correct heads, correct labels, scored tokens), one per sentence:
    the resampling unit for comparing two parsers.
    """
    rows = [_sentence_counts(pair, edge_filter, exact_labels) for pair in pairs]
    return np.array(rows, dtype=np.int64).reshape(-1, 3)


def _ratio(numerator, denominator) -> np.ndarray:
    numerator = np.asarray(numerator, dtype=float)
    denominator = np.asarray(denominator, dtype=float)
    return np.divide(numerator, denominator, out=np.zeros_like(numerator), where=denominator != 0)


# Parsing rows are (heads, labels, tokens); RE rows are (predicted positive,
# gold positive, correct).
METRICS = {
    "uas": lambda totals: _ratio(totals[..., 0], totals[..., 2]),
    "las": lambda totals: _ratio(totals[..., 1], totals[..., 2]),
    "precision": lambda totals: _ratio(totals[..., 2], totals[..., 0]),
    "recall": lambda totals: _ratio(totals[..., 2], totals[..., 1]),
    "f1": lambda totals: _ratio(2 * totals[..., 2], totals[..., 0] + totals[..., 1]),
}


def corpus_metric(outcomes: np.ndarray, metric: str) -> float:
    return float(METRICS[metric](np.asarray(outcomes).sum(axis=0)))


def paired_bootstrap(
    outcomes_a: np.ndarray,
    outcomes_b: np.ndarray,
    metric: str = "f1",
    n_resamples: int = DEFAULT_RESAMPLES,
    seed: int = 0,
    two_sided: bool = False,
    unit_ids: Sequence[str] | None = None,
) -> BootstrapResult:
    """
    Paired bootstrap test that system b beats system a.

    Units are resampled with replacement; resample i draws from its own
    generator seeded with (seed, i), so the run is reproducible and can be
    split across workers. The one-sided p-value is the share of resamples in
    which b does not beat a, ties counting half.

    :param outcomes_a: per-unit count rows of system a (see METRICS).
    :param outcomes_b: the same units scored for system b.
    :param unit_ids: when given, units are put in id order first so the
        result does not depend on input order.
    """
    if metric not in METRICS:
        raise ScoringError(f"Unknown metric {metric!r}, expected one of {sorted(METRICS)}")
    a = np.asarray(outcomes_a, dtype=np.int64)
    b = np.asarray(outcomes_b, dtype=np.int64)
    if a.shape != b.shape:
        raise ScoringError(f"Outcome shapes differ: {a.shape} vs {b.shape}")
    n_units = a.shape[0] if a.ndim else 0
    if n_units == 0:
        raise ScoringError("Cannot bootstrap over zero units")
    if seed < 0:
        raise ScoringError("Seed must be non-negative")
    if unit_ids is not None:
        if len(unit_ids) != n_units:
            raise ScoringError(f"{len(unit_ids)} unit ids for {n_units} units")
        order = sorted(range(n_units), key=lambda i: unit_ids[i])
        a, b = a[order], b[order]

    score = METRICS[metric]
    observed = float(score(b.sum(axis=0)) - score(a.sum(axis=0)))
    deltas = np.empty(n_resamples, dtype=float)
    for index in range(n_resamples):
        rng = np.random.default_rng([seed, index])
        sample = rng.integers(0, n_units, size=n_units)
        deltas[index] = score(b[sample].sum(axis=0)) - score(a[sample].sum(axis=0))

    losses = np.count_nonzero(deltas < 0) + 0.5 * np.count_nonzero(deltas == 0)
    p_value = float(losses / n_resamples)
    if two_sided:
        p_value = min(1.0, 2 * min(p_value, 1.0 - p_value))
    logger.info(f"Bootstrap {metric}: delta {observed:+.4f}, p={p_value:.4f} ({n_resamples} resamples)")
    return BootstrapResult(
        p_value=p_value,
        n_resamples=n_resamples,
        seed=seed,
        observed_delta=observed,
        metric=metric,
        two_sided=two_sided,
        n_units=n_units,
    )
