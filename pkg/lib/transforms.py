# coding=utf-8
"""
Label-only rewrites of UD trees that make them more stable across languages.

Every transformation changes deprel values and nothing else: heads, forms and
all other token fields come out exactly as they went in.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from lib.exceptions import AnnotationError
from lib.models.annotations import (
    AdverbialTagSet,
    ProcessAnnotation,
    SnacsAnnotation,
    normalize_supersense,
)
from lib.models.sentence import DepLabel, Sentence

logger = logging.getLogger(__name__)

ARGUMENT_LABEL = DepLabel("A")
ACL = DepLabel("acl")
ADVMOD = DepLabel("advmod")
IOBJ = DepLabel("iobj")

NOMINAL_RULES = {
    "compound": ACL,
    "nmod": ACL,
    "amod": ACL,
}
# Incoming edge of a process head.
PROCESS_HEAD_RULES = {
    "nsubj": DepLabel("csubj"),
    "nmod": ACL,
    "compound": ACL,
    "obj": DepLabel("ccomp"),
    "iobj": DepLabel("ccomp"),
    "obl": DepLabel("advcl"),
}
# Edges leaving a process head.
PROCESS_DEPENDENT_RULES = {
    "amod": ADVMOD,
    "acl": DepLabel("advcl"),
    "nmod": ARGUMENT_LABEL,
    "compound": ARGUMENT_LABEL,
}
HARMONIZED_LABELS = frozenset({"nsubj", "obj", "iobj", "obl"})


class Transformation(str, Enum):
    NOMINAL = "nominal"
    PREDICATE = "predicate"
    OBLIQUE = "oblique"


class Harmonize(str, Enum):
    GLOBAL = "global"
    PROCESS = "process"


def _nominal_labels(sentence: Sentence) -> dict[int, DepLabel]:
    return {
        token.id: NOMINAL_RULES[token.deprel.universal]
        for token in sentence.tokens
        if token.deprel.universal in NOMINAL_RULES
    }


def transform_nominal(sentence: Sentence) -> Sentence:
    """
    Relabel compound, nmod and amod edges as acl.
    """
    return sentence.with_labels(_nominal_labels(sentence))


def _predicate_labels(
    sentence: Sentence, process_heads: frozenset[int], harmonize: Harmonize
) -> dict[int, DepLabel]:
    current = {token.id: token.deprel for token in sentence.tokens}
    relabeled: dict[int, DepLabel] = {}

    for head_id in sorted(process_heads):
        new_label = PROCESS_HEAD_RULES.get(current[head_id].universal)
        if new_label is not None:
            current[head_id] = relabeled[head_id] = new_label

    for token in sentence.tokens:
        if token.head in process_heads:
            new_label = PROCESS_DEPENDENT_RULES.get(current[token.id].universal)
            if new_label is not None:
                current[token.id] = relabeled[token.id] = new_label

    if harmonize is Harmonize.GLOBAL or process_heads:
        for token in sentence.tokens:
            if token.id not in relabeled and current[token.id].universal in HARMONIZED_LABELS:
                relabeled[token.id] = ARGUMENT_LABEL
    return relabeled


def transform_predicate(
    sentence: Sentence,
    process_heads: Iterable[int],
    harmonize: Harmonize | str = Harmonize.GLOBAL,
) -> Sentence:
    """
    Recast process-headed nominal subtrees as clauses, then collapse core and
    oblique arguments into the single label `A`.

    The three phases run in order and each sees the labels left by the one
    before: the incoming edge of every process head, then the edges leaving
    process heads, then every edge not yet touched.

    :param process_heads: ids of tokens heading Process subtrees.
    :param harmonize: `global` rewrites nsubj/obj/iobj/obl in every sentence,
        `process` only in sentences with at least one process head.
    """
    process_heads = frozenset(process_heads)
    outside = sorted(i for i in process_heads if not 1 <= i <= len(sentence))
    if outside:
        raise AnnotationError(f"Process heads {outside} are outside sentence {sentence.sent_id}")
    return sentence.with_labels(_predicate_labels(sentence, process_heads, Harmonize(harmonize)))


def _resolve_supersense(
    sentence: Sentence, obl_id: int, supersenses: Mapping[int, str]
) -> str | None:
    case_children = [child.id for child in sentence.children(obl_id) if child.deprel.universal == "case"]
    if case_children and supersenses.get(case_children[0]):
        return normalize_supersense(supersenses[case_children[0]])
    if supersenses.get(obl_id):
        return normalize_supersense(supersenses[obl_id])
    return None


def _oblique_labels(
    sentence: Sentence, supersenses: Mapping[int, str], adverbial: AdverbialTagSet
) -> tuple[dict[int, DepLabel], int]:
    labels = {}
    missing = 0
    for token in sentence.tokens:
        if token.deprel.universal != "obl":
            continue
        supersense = _resolve_supersense(sentence, token.id, supersenses)
        if supersense is None:
            missing += 1
            labels[token.id] = IOBJ
        else:
            labels[token.id] = ADVMOD if supersense in adverbial else IOBJ
    return labels, missing


def transform_oblique(
    sentence: Sentence,
    supersenses: Mapping[int, str] | None,
    adverbial: AdverbialTagSet = AdverbialTagSet(),
) -> Sentence:
    """
    Split obl into advmod (adverbial supersense) and iobj (everything else).

    The supersense is read off the leftmost case child of the obl dependent,
    falling back to the dependent itself. An obl with neither becomes iobj.
    """
    labels, _missing = _oblique_labels(sentence, supersenses or {}, adverbial)
    return sentence.with_labels(labels)


@dataclass
class TransformDiagnostics:
    rule_counts: Counter = field(default_factory=Counter)
    missing_annotation: list[str] = field(default_factory=list)
    missing_supersense: int = 0

    def record(self, before: Sentence, after: Sentence):
        for old, new in zip(before.tokens, after.tokens):
            if old.deprel != new.deprel:
                self.rule_counts[f"{old.deprel.universal}->{new.deprel}"] += 1

    def to_dict(self) -> dict:
        return {
            "relabeled": sum(self.rule_counts.values()),
            "rule_counts": dict(sorted(self.rule_counts.items())),
            "missing_annotation": list(self.missing_annotation),
            "missing_supersense": self.missing_supersense,
        }


@dataclass(frozen=True)
class TransformResult:
    sentences: list[Sentence]
    diagnostics: TransformDiagnostics


def transform_treebank(
    treebank: Iterable[Sentence],
    which: Transformation | str,
    process: ProcessAnnotation | None = None,
    snacs: SnacsAnnotation | None = None,
    adverbial: AdverbialTagSet = AdverbialTagSet(),
    harmonize: Harmonize | str = Harmonize.GLOBAL,
    allow_missing: bool = False,
) -> TransformResult:
    """
    Apply one transformation to every sentence.

    :param which: nominal, predicate or oblique.
    :param process: process heads, needed by predicate.
    :param snacs: supersenses, needed by oblique.
    :param allow_missing: run predicate/oblique without their annotation,
        treating every sentence as unannotated.
    """
    which = Transformation(which)
    harmonize = Harmonize(harmonize)
    annotation = {Transformation.PREDICATE: process, Transformation.OBLIQUE: snacs}.get(which)
    if which is not Transformation.NOMINAL and annotation is None:
        if not allow_missing:
            raise AnnotationError(f"The {which.value} transformation needs its sidecar annotation")
        logger.warning(f"Running {which.value} without annotation, every sentence falls back")
        annotation = ProcessAnnotation() if which is Transformation.PREDICATE else SnacsAnnotation()

    diagnostics = TransformDiagnostics()
    sentences = []
    for sentence in treebank:
        if which is Transformation.NOMINAL:
            result = transform_nominal(sentence)
        else:
            annotation.check(sentence)
            record = annotation.get(sentence.sent_id)
            if record is None:
                diagnostics.missing_annotation.append(sentence.sent_id)
            if which is Transformation.PREDICATE:
                result = transform_predicate(sentence, record or frozenset(), harmonize)
            else:
                labels, missing = _oblique_labels(sentence, record or {}, adverbial)
                diagnostics.missing_supersense += missing
                result = sentence.with_labels(labels)
        diagnostics.record(sentence, result)
        sentences.append(result)

    if diagnostics.missing_annotation:
        logger.warning(
            f"{len(diagnostics.missing_annotation)} sentences had no {which.value} annotation record"
        )
    if diagnostics.missing_supersense:
        logger.warning(f"{diagnostics.missing_supersense} obl edges had no supersense, relabeled iobj")
    logger.info(
        f"Applied {which.value} to {len(sentences)} sentences, "
        f"{sum(diagnostics.rule_counts.values())} edges relabeled"
    )
    return TransformResult(sentences, diagnostics)
