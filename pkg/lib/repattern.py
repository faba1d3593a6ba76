# coding=utf-8
"""
Pattern-based relation extraction.

Training turns every instance into a dependency-path pattern and counts the
relations seen with it; prediction looks the pattern up and takes a majority
vote.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from lib.exceptions import ConfigError, ScoringError
from lib.models.pattern import DEFAULT_SCHEME, Pattern, PatternDictionary
from lib.models.relation_instance import NO_RELATION, RelationInstance
from lib.models.scores import REScores
from lib.models.trigger_lexicon import TriggerLexicon
from lib.utils.tree_utils import dependency_graph, shortest_path

logger = logging.getLogger(__name__)

TRANSFORMED_SCHEME = "transformed"


class Setting(str, Enum):
    STANDARD = "standard"
    PARALLEL = "parallel"
    ENSEMBLE = "ensemble"


def find_triggers(instance: RelationInstance, lexicon: TriggerLexicon) -> list[tuple[int, str]]:
    """
    (token id, trigger type) for every lexicon hit outside both entity spans,
    in token order.
    """
    entity_ids = instance.subj_ids | instance.obj_ids
    found = []
    for token in instance.parse.tokens:
        if token.id in entity_ids:
            continue
        found.extend((token.id, trigger_type) for trigger_type in lexicon.match(token))
    return found


def _trigger_free_pattern(instance: RelationInstance, graph) -> Pattern | None:
    path = shortest_path(instance.parse, instance.subj_ids, instance.obj_ids, graph)
    if path is None:
        return None
    return Pattern.from_paths(instance.subj_type, path, instance.obj_type)


def extract_pattern(instance: RelationInstance, lexicon: TriggerLexicon) -> Pattern | None:
    """
    The instance's pattern. With triggers present, the one whose
    subject-trigger-object route is shortest (ties: leftmost trigger, then
    smallest pattern string); otherwise the subject-object path.
    """
    graph = dependency_graph(instance.parse)
    best_key = None
    best = None
    for token_id, trigger_type in find_triggers(instance, lexicon):
        first = shortest_path(instance.parse, instance.subj_ids, {token_id}, graph)
        second = shortest_path(instance.parse, {token_id}, instance.obj_ids, graph)
        if first is None or second is None:
            continue
        pattern = Pattern.from_paths(instance.subj_type, first, instance.obj_type, trigger_type, second)
        key = (pattern.hops, token_id, pattern.render())
        if best_key is None or key < best_key:
            best_key, best = key, pattern
    if best is not None:
        return best
    return _trigger_free_pattern(instance, graph)


def extract_patterns(
    instance: RelationInstance, lexicon: TriggerLexicon, include_trigger_free: bool = False
) -> list[Pattern]:
    """
    :param include_trigger_free: also return the plain subject-object pattern
        when the main one is trigger-anchored.
    """
    pattern = extract_pattern(instance, lexicon)
    patterns = [pattern] if pattern is not None else []
    if include_trigger_free and pattern is not None and pattern.trigger_type is not None:
        plain = _trigger_free_pattern(instance, dependency_graph(instance.parse))
        if plain is not None:
            patterns.append(plain)
    return patterns


def train(
    instances: Iterable[RelationInstance],
    lexicon: TriggerLexicon,
    scheme: str = DEFAULT_SCHEME,
    count_negatives: bool = True,
    include_trigger_free: bool = False,
) -> PatternDictionary:
    """
    Count (pattern, gold relation) pairs.

    :param count_negatives: let no_relation instances add votes for
        no_relation.
    """
    dictionary = PatternDictionary()
    seen = 0
    for instance in instances:
        if instance.gold_relation is None:
            raise ScoringError(f"Training instance {instance.id} has no gold relation")
        seen += 1
        if instance.gold_relation == NO_RELATION and not count_negatives:
            continue
        for pattern in extract_patterns(instance, lexicon, include_trigger_free):
            dictionary.add(pattern, instance.gold_relation, scheme)
    logger.info(f"Trained {len(dictionary)} {scheme} patterns from {seen} instances")
    return dictionary


def vote(counts: Mapping[str, int], totals: Mapping[str, int]) -> str:
    """
    Relation with the most votes; ties go to the relation more frequent in the
    whole dictionary, then to the smaller name.
    """
    if not counts:
        return NO_RELATION
    relation, _count = min(counts.items(), key=lambda item: (-item[1], -totals.get(item[0], 0), item[0]))
    return relation


def _evidence(
    instance: RelationInstance,
    dictionary: PatternDictionary,
    lexicon: TriggerLexicon,
    scheme: str | None,
    include_trigger_free: bool,
) -> dict[tuple[str | None, str], Counter]:
    return {
        (scheme, pattern.render()): dictionary.lookup(pattern, scheme)
        for pattern in extract_patterns(instance, lexicon, include_trigger_free)
    }


def _pool(evidence: Mapping[tuple[str | None, str], Counter]) -> Counter:
    pooled = Counter()
    for counts in evidence.values():
        pooled.update(counts)
    return pooled


def predict(
    instance: RelationInstance,
    dictionary: PatternDictionary,
    lexicon: TriggerLexicon,
    scheme: str = None,
    include_trigger_free: bool = False,
) -> str:
    """
    :param scheme: look patterns up in this scheme only; all schemes pooled
        when None.
    """
    pooled = _pool(_evidence(instance, dictionary, lexicon, scheme, include_trigger_free))
    return vote(pooled, dictionary.relation_totals(scheme))


def predict_ensemble(
    instance_a: RelationInstance,
    instance_b: RelationInstance,
    dictionary: PatternDictionary,
    lexicon: TriggerLexicon,
    scheme_a: str = None,
    scheme_b: str = None,
    include_trigger_free: bool = False,
) -> str:
    """
    Vote over the pooled counts of the patterns of two parses of the same
    instance. When pooling hands the win to no_relation although one parse
    alone votes for a relation, the vote is retaken among relations only, so
    a hit in either parse is never lost.
    """
    if (instance_a.id, instance_a.tokens, instance_a.subj_span, instance_a.obj_span) != (
        instance_b.id,
        instance_b.tokens,
        instance_b.subj_span,
        instance_b.obj_span,
    ):
        raise ScoringError(f"Instances {instance_a.id} and {instance_b.id} are not two parses of one example")

    evidence_a = _evidence(instance_a, dictionary, lexicon, scheme_a, include_trigger_free)
    evidence_b = _evidence(instance_b, dictionary, lexicon, scheme_b, include_trigger_free)
    pooled = _pool({**evidence_a, **evidence_b})

    totals = dictionary.relation_totals(scheme_a)
    if scheme_b != scheme_a:
        totals = totals + dictionary.relation_totals(scheme_b)
    relation = vote(pooled, totals)
    if relation != NO_RELATION:
        return relation

    singles = (
        vote(_pool(evidence_a), dictionary.relation_totals(scheme_a)),
        vote(_pool(evidence_b), dictionary.relation_totals(scheme_b)),
    )
    if any(single != NO_RELATION for single in singles):
        positives = Counter({name: count for name, count in pooled.items() if name != NO_RELATION})
        return vote(positives, totals)
    return NO_RELATION


def _check_ids(predictions: Mapping[str, str], golds: Mapping[str, str]):
    if set(predictions) != set(golds):
        missing = sorted(set(golds) - set(predictions))
        extra = sorted(set(predictions) - set(golds))
        raise ScoringError(
            f"Prediction and gold ids differ: {len(missing)} missing {missing[:5]}, "
            f"{len(extra)} unexpected {extra[:5]}"
        )


def score(predictions: Mapping[str, str], golds: Mapping[str, str]) -> REScores:
    """
    Micro precision, recall and F1 with no_relation as the negative class.
    """
    _check_ids(predictions, golds)
    predicted_positive = sum(1 for relation in predictions.values() if relation != NO_RELATION)
    gold_positive = sum(1 for relation in golds.values() if relation != NO_RELATION)
    correct = sum(
        1
        for example_id, relation in predictions.items()
        if relation != NO_RELATION and relation == golds[example_id]
    )
    return REScores.from_counts(predicted_positive, gold_positive, correct)


def example_outcomes(
    predictions: Mapping[str, str], golds: Mapping[str, str]
) -> tuple[list[str], np.ndarray]:
    """
    Per-example (predicted positive, gold positive, correct) rows in id order,
    the resampling unit of the RE bootstrap.
    """
    _check_ids(predictions, golds)
    ids = sorted(golds)
    rows = []
    for example_id in ids:
        predicted, gold = predictions[example_id], golds[example_id]
        rows.append(
            (
                int(predicted != NO_RELATION),
                int(gold != NO_RELATION),
                int(predicted != NO_RELATION and predicted == gold),
            )
        )
    return ids, np.array(rows, dtype=np.int64).reshape(-1, 3)


@dataclass(frozen=True)
class SettingResult:
    setting: Setting
    scores: REScores
    predictions: dict[str, str]
    dictionary: PatternDictionary
    n_train: int

    def to_dict(self) -> dict:
        return {
            "setting": self.setting.value,
            "n_train": self.n_train,
            "n_test": len(self.predictions),
            "patterns": len(self.dictionary),
            **self.scores.to_dict(),
        }


def _by_id(instances: Sequence[RelationInstance], expected: Sequence[RelationInstance], name: str):
    by_id = {instance.id: instance for instance in instances}
    missing = [instance.id for instance in expected if instance.id not in by_id]
    if missing:
        raise ConfigError(f"The ensemble needs a second parse of every {name} instance; missing {missing[:5]}")
    return by_id


def train_ensemble(
    instances: Sequence[RelationInstance],
    variant: Sequence[RelationInstance],
    lexicon: TriggerLexicon,
    count_negatives: bool = True,
    include_trigger_free: bool = False,
) -> PatternDictionary:
    """
    One dictionary holding patterns of both parses: the original under
    DEFAULT_SCHEME and the second parse under TRANSFORMED_SCHEME.

    :param variant: the same instances over the second parse, matched by id.
    """
    other = _by_id(variant, instances, "training")
    return train(instances, lexicon, DEFAULT_SCHEME, count_negatives, include_trigger_free).merge(
        train(
            [other[instance.id] for instance in instances],
            lexicon,
            TRANSFORMED_SCHEME,
            count_negatives,
            include_trigger_free,
        )
    )


def evaluate_setting(
    train_set: Sequence[RelationInstance],
    test_set: Sequence[RelationInstance],
    setting: Setting | str,
    lexicon: TriggerLexicon,
    excluded_sources: Iterable[str] | None = None,
    train_variant: Sequence[RelationInstance] | None = None,
    test_variant: Sequence[RelationInstance] | None = None,
    include_test_sources: bool = False,
    count_negatives: bool = True,
    include_trigger_free: bool = False,
) -> SettingResult:
    """
    Train, predict and score under one evaluation setting.

    :param setting: `standard` drops training instances that share a source
        sentence with the test set, `parallel` keeps them, `ensemble` trains on
        both parses and decodes with predict_ensemble.
    :param excluded_sources: source ids to drop for standard and ensemble;
        defaults to the origins of the test instances.
    :param train_variant: second parse of the training set (ensemble).
    :param test_variant: second parse of the test set (ensemble).
    :param include_test_sources: keep test sources in training for ensemble.
    """
    setting = Setting(setting)
    train_set = list(train_set)
    if setting is Setting.STANDARD or (setting is Setting.ENSEMBLE and not include_test_sources):
        excluded = set(excluded_sources) if excluded_sources is not None else {i.origin for i in test_set}
        kept = [instance for instance in train_set if instance.origin not in excluded]
        logger.info(f"Excluded {len(train_set) - len(kept)} training instances sharing a test source")
        train_set = kept

    golds = {}
    for instance in test_set:
        if instance.gold_relation is None:
            raise ScoringError(f"Test instance {instance.id} has no gold relation")
        golds[instance.id] = instance.gold_relation

    if setting is Setting.ENSEMBLE:
        if train_variant is None or test_variant is None:
            raise ConfigError("The ensemble setting needs a second parse of the train and test sets")
        test_other = _by_id(test_variant, test_set, "test")
        dictionary = train_ensemble(train_set, train_variant, lexicon, count_negatives, include_trigger_free)
        predictions = {
            instance.id: predict_ensemble(
                instance,
                test_other[instance.id],
                dictionary,
                lexicon,
                DEFAULT_SCHEME,
                TRANSFORMED_SCHEME,
                include_trigger_free,
            )
            for instance in test_set
        }
    else:
        dictionary = train(train_set, lexicon, DEFAULT_SCHEME, count_negatives, include_trigger_free)
        predictions = {
            instance.id: predict(instance, dictionary, lexicon, None, include_trigger_free)
            for instance in test_set
        }

    scores = score(predictions, golds)
    logger.info(f"{setting.value}: P={scores.precision:.4f} R={scores.recall:.4f} F1={scores.f1:.4f}")
    return SettingResult(setting, scores, predictions, dictionary, len(train_set))
