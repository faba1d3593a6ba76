# coding=utf-8
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from lib.exceptions import PairingError
from lib.models.sentence import UPOS_TAGS, DepLabel, Sentence, Token

DEFAULT_FUNCTION_WORD_UPOS = frozenset({"ADP", "AUX", "CCONJ", "SCONJ", "DET", "PART", "PUNCT"})


@dataclass(frozen=True)
class FunctionWordConfig:
    upos: frozenset[str] = DEFAULT_FUNCTION_WORD_UPOS

    def __post_init__(self):
        object.__setattr__(self, "upos", frozenset(self.upos))
        unknown = self.upos - UPOS_TAGS
        if unknown:
            raise ValueError(f"Unknown UPOS tags in function-word set: {sorted(unknown)}")


def strip_subtype(label: DepLabel) -> DepLabel:
    return label.strip_subtype()


def labels_match(first: DepLabel, second: DepLabel, exact_labels: bool = False) -> bool:
    """
    Compare two relations under the label policy: universal part only unless
    `exact_labels` is set.
    """
    if exact_labels:
        return first == second
    return first.universal == second.universal


def is_function_word(token: Token, config: FunctionWordConfig = FunctionWordConfig()) -> bool:
    return token.upos in config.upos


def label_histogram(treebank: Iterable[Sentence], exact_labels: bool = False) -> Counter:
    histogram = Counter()
    for sentence in treebank:
        for token in sentence.tokens:
            label = token.deprel if exact_labels else token.deprel.strip_subtype()
            histogram[str(label)] += 1
    return histogram


def sentence_keys(treebank: Sequence[Sentence]) -> list[str]:
    """
    One key per sentence: its sent_id, or `#<position>` (1-based) for a
    sentence without one.

    :raises PairingError: when two sentences end up with the same key.
    """
    keys = [
        sentence.sent_id if sentence.sent_id is not None else f"#{position}"
        for position, sentence in enumerate(treebank, start=1)
    ]
    duplicates = [key for key, count in Counter(keys).items() if count > 1]
    if duplicates:
        raise PairingError("Duplicate sentence ids", duplicates)
    return keys
