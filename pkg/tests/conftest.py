# coding=utf-8
"""
Shared pytest fixtures for all tests.
"""
import numpy as np
import pytest

from lib.models.alignment import SentenceAlignment
from lib.models.relation_instance import NO_RELATION, RelationInstance
from lib.models.sentence import Sentence, Token
from lib.models.trigger_lexicon import TriggerLexicon

RANDOM_LABELS = (
    "nsubj",
    "obj",
    "iobj",
    "obl",
    "nmod",
    "amod",
    "compound",
    "acl",
    "advmod",
    "case",
    "det",
    "mark",
    "conj",
    "punct",
    "nsubj:pass",
    "obl:tmod",
    "nmod:poss",
)
RANDOM_UPOS = ("NOUN", "VERB", "ADJ", "ADV", "PROPN", "PRON", "ADP", "DET", "PUNCT", "AUX")


def make_sentence(rows, sent_id="s1", text=None) -> Sentence:
    """
    Build a sentence from (form, upos, head, deprel) rows, with an optional
    fifth lemma column.
    """
    tokens = []
    for index, row in enumerate(rows, start=1):
        form, upos, head, deprel = row[:4]
        lemma = row[4] if len(row) > 4 else form.lower()
        tokens.append(Token(id=index, form=form, lemma=lemma, upos=upos, head=head, deprel=deprel))
    return Sentence(sent_id=sent_id, text=text or " ".join(row[0] for row in rows), tokens=tokens)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Keep run settings from the developer's shell out of the tests."""
    for variable in ("UDSTAB_SEED", "UDSTAB_RESAMPLES", "UDSTAB_OUTPUT_DIR", "UDSTAB_LOG_LEVEL"):
        monkeypatch.delenv(variable, raising=False)


@pytest.fixture
def build_sentence():
    """Factory for hand-written sentences."""
    return make_sentence


@pytest.fixture
def japanese_company_pair():
    """English `Japanese company` and a translation that marks the modifier as compound."""
    src = make_sentence([("Japanese", "ADJ", 2, "amod"), ("company", "NOUN", 0, "root")], "pair-1")
    tgt = make_sentence([("Nihon", "PROPN", 2, "compound"), ("kaisha", "NOUN", 0, "root")], "pair-1")
    alignment = SentenceAlignment("pair-1", "pair-1", frozenset({(1, 1), (2, 2)}))
    return src, tgt, alignment


@pytest.fixture
def erdogan_tree():
    """The nine-token `Erdogan announced his government 's plans to free Bosphorus` tree."""
    return make_sentence(
        [
            ("Erdogan", "PROPN", 2, "nsubj"),
            ("announced", "VERB", 0, "root"),
            ("his", "PRON", 4, "amod"),
            ("government", "NOUN", 6, "nmod"),
            ("'s", "PART", 4, "case"),
            ("plans", "NOUN", 2, "obj"),
            ("to", "PART", 8, "mark"),
            ("free", "VERB", 6, "acl"),
            ("Bosphorus", "PROPN", 8, "obj"),
        ],
        "erdogan",
    )


def random_sentence(rng: np.random.Generator, sent_id: str, min_tokens: int = 2, max_tokens: int = 12) -> Sentence:
    n = int(rng.integers(min_tokens, max_tokens + 1))
    order = [int(i) for i in rng.permutation(n) + 1]
    heads = {order[0]: 0}
    for position, token_id in enumerate(order[1:], start=1):
        heads[token_id] = order[int(rng.integers(0, position))]
    tokens = []
    for token_id in range(1, n + 1):
        head = heads[token_id]
        deprel = "root" if head == 0 else RANDOM_LABELS[int(rng.integers(len(RANDOM_LABELS)))]
        upos = RANDOM_UPOS[int(rng.integers(len(RANDOM_UPOS)))]
        tokens.append(Token(id=token_id, form=f"w{token_id}", upos=upos, head=head, deprel=deprel))
    return Sentence(sent_id=sent_id, text=" ".join(t.form for t in tokens), tokens=tokens)


@pytest.fixture
def random_treebank():
    """Factory for seeded random treebanks."""

    def factory(size: int, seed: int = 0, min_tokens: int = 2, max_tokens: int = 12) -> list[Sentence]:
        rng = np.random.default_rng(seed)
        return [random_sentence(rng, f"r{index}", min_tokens, max_tokens) for index in range(size)]

    return factory


# Synthetic relation corpus: verb form, object type and relation per kind.
CORPUS_KINDS = {
    "founded": ("founded", "ORGANIZATION", "org:founded_by"),
    "employ": ("works", "ORGANIZATION", "per:employee_of"),
    "residence": ("lives", "CITY", "per:city_of_residence"),
    "met": ("met", "PERSON", NO_RELATION),
}
TEST_KINDS = ("founded", "founded", "employ", "employ", "residence", "residence", "met", "met", "founded", "employ")
TRAIN_KINDS = ("founded", "employ", "met")


def make_instance(
    rows,
    subj_span,
    obj_span,
    relation=None,
    instance_id="e1",
    subj_type="PERSON",
    obj_type="ORGANIZATION",
    source_id=None,
) -> RelationInstance:
    return RelationInstance(
        id=instance_id,
        tokens=[row[0] for row in rows],
        subj_span=subj_span,
        obj_span=obj_span,
        subj_type=subj_type,
        obj_type=obj_type,
        parse=make_sentence(rows, instance_id),
        gold_relation=relation,
        source_id=source_id,
    )


def corpus_instance(index: int, kind: str) -> RelationInstance:
    verb, obj_type, relation = CORPUS_KINDS[kind]
    rows = [(f"P{index}", "PROPN", 2, "nsubj"), (verb, "VERB", 0, "root"), (f"O{index}", "PROPN", 2, "obj")]
    return make_instance(rows, (1, 1), (3, 3), relation, f"i{index}", "PERSON", obj_type, f"s{index // 2}")


def relation_corpus() -> tuple[list[RelationInstance], list[RelationInstance]]:
    """
    Forty instances, two per source sentence. The first ten are the test set;
    training holds all forty, and no residence example survives once the test
    sources are removed.
    """
    instances = [corpus_instance(index, kind) for index, kind in enumerate(TEST_KINDS)]
    instances += [corpus_instance(index, TRAIN_KINDS[index % 3]) for index in range(10, 40)]
    return instances, instances[:10]


@pytest.fixture
def lexicon():
    return TriggerLexicon({"founded": {"founded"}, "employ": {"works", "works for"}, "residence": {"lives"}})
