# coding=utf-8
"""
Cross-lingual stability of target-side dependency edges.

Every edge of a translated sentence falls into exactly one category, decided
in a fixed order: function words first, then alignment cardinality, then the
shape of the corresponding source edge.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from lib.exceptions import PairingError, ScoringError
from lib.models.alignment import SentenceAlignment
from lib.models.edge_category import CATEGORY_ORDER, EdgeCategory
from lib.models.sentence import Edge, Sentence
from lib.utils.helpers import FunctionWordConfig, is_function_word, labels_match, sentence_keys

logger = logging.getLogger(__name__)

SentenceClassification = dict[Edge, EdgeCategory]
TreebankClassification = dict[str, SentenceClassification]


@dataclass(frozen=True)
class StabilityConfig:
    function_words: FunctionWordConfig = field(default_factory=FunctionWordConfig)
    exact_labels: bool = False


DEFAULT_CONFIG = StabilityConfig()


def _classify(
    edge: Edge,
    src: Sentence,
    tgt: Sentence,
    sources: dict[int, tuple[int, ...]],
    config: StabilityConfig,
) -> EdgeCategory:
    head = tgt.token(edge.head_id)
    dependent = tgt.token(edge.dep_id)
    if is_function_word(head, config.function_words) or is_function_word(
        dependent, config.function_words
    ):
        return EdgeCategory.FUNCTION_WORD

    head_sources = sources.get(edge.head_id, ())
    dep_sources = sources.get(edge.dep_id, ())
    if len(head_sources) != 1 or len(dep_sources) != 1:
        return EdgeCategory.UNALIGNED

    w1, w2 = head_sources[0], dep_sources[0]
    if src.has_edge(w1, w2):
        if labels_match(edge.label, src.token(w2).deprel, config.exact_labels):
            return EdgeCategory.FULLY_ALIGNED
        return EdgeCategory.PARTIALLY_ALIGNED
    if src.has_edge(w2, w1):
        return EdgeCategory.FLIPPED
    return EdgeCategory.MISALIGNED


def classify_edge(
    edge: Edge,
    src: Sentence,
    tgt: Sentence,
    alignment: SentenceAlignment,
    config: StabilityConfig = DEFAULT_CONFIG,
) -> EdgeCategory:
    """
    Assign the stability category of one target edge.

    :param edge: an edge of `tgt`.
    :param src: the source-language sentence.
    :param tgt: its translation.
    :param alignment: links from `src` tokens to `tgt` tokens.
    :param config: function-word set and label comparison policy.
    """
    if not tgt.has_edge(edge.head_id, edge.dep_id):
        raise ValueError(
            f"Edge {edge.head_id}->{edge.dep_id} does not belong to sentence {tgt.sent_id}"
        )
    alignment.validate(src, tgt)
    return _classify(edge, src, tgt, alignment.source_map(), config)


def classify_sentence(
    src: Sentence,
    tgt: Sentence,
    alignment: SentenceAlignment,
    config: StabilityConfig = DEFAULT_CONFIG,
) -> SentenceClassification:
    alignment.validate(src, tgt)
    sources = alignment.source_map()
    return {edge: _classify(edge, src, tgt, sources, config) for edge in tgt.edges()}


def pair_sentences(
    src_treebank: Sequence[Sentence],
    tgt_treebank: Sequence[Sentence],
    alignments: Iterable[SentenceAlignment],
) -> list[tuple[str, Sentence, Sentence, SentenceAlignment]]:
    """
    Match every target sentence with its source and alignment, keyed as in
    `sentence_keys`. The source is the one named by the alignment record,
    else the one with the same key; a missing alignment record stands for an
    empty one.
    """
    sources = dict(zip(sentence_keys(src_treebank), src_treebank))
    targets = list(zip(sentence_keys(tgt_treebank), tgt_treebank))
    by_target = {alignment.tgt_sent_id: alignment for alignment in alignments}

    def partner_key(key: str) -> str:
        alignment = by_target.get(key)
        if alignment is not None and alignment.src_sent_id in sources:
            return alignment.src_sent_id
        return key

    orphans = [key for key, _tgt in targets if partner_key(key) not in sources]
    if orphans:
        raise PairingError("Target sentences without a source partner", orphans)

    quadruples = []
    for key, tgt in targets:
        src_key = partner_key(key)
        alignment = by_target.get(key)
        if alignment is None:
            logger.warning(f"No alignment record for sentence {key}, treating it as unaligned")
            alignment = SentenceAlignment(src_key, key)
        quadruples.append((key, sources[src_key], tgt, alignment))
    return quadruples


def classify_treebank(
    src_treebank: Sequence[Sentence],
    tgt_treebank: Sequence[Sentence],
    alignments: Iterable[SentenceAlignment],
    config: StabilityConfig = DEFAULT_CONFIG,
) -> TreebankClassification:
    """
    Classify every target edge. The result is keyed by `sentence_keys` of the
    target treebank.
    """
    classification: TreebankClassification = {}
    for key, src, tgt, alignment in pair_sentences(src_treebank, tgt_treebank, alignments):
        classification[key] = classify_sentence(src, tgt, alignment, config)
    logger.info(f"Classified {len(classification)} sentences")
    return classification


@dataclass(frozen=True)
class CategoryDistribution:
    counts: dict[EdgeCategory, int]
    total: int

    @property
    def percentages(self) -> dict[EdgeCategory, float]:
        return {category: 100.0 * self.counts[category] / self.total for category in CATEGORY_ORDER}

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "counts": {category.value: self.counts[category] for category in CATEGORY_ORDER},
            "percentages": {
                category.value: value for category, value in self.percentages.items()
            },
        }


def category_distribution(classification: TreebankClassification) -> CategoryDistribution:
    counts = Counter(
        category for sentence in classification.values() for category in sentence.values()
    )
    total = sum(counts.values())
    if total == 0:
        raise ScoringError("Cannot compute a category distribution over zero edges")
    return CategoryDistribution(
        counts={category: counts.get(category, 0) for category in CATEGORY_ORDER},
        total=total,
    )


def classification_records(classification: TreebankClassification) -> list[dict]:
    """
    One JSON-ready row per classified edge.
    """
    return [
        {
            "sent_id": sent_id,
            "dep_id": edge.dep_id,
            "head_id": edge.head_id,
            "label": str(edge.label),
            "category": category.value,
        }
        for sent_id, edges in classification.items()
        for edge, category in edges.items()
    ]
