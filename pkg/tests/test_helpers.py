# coding=utf-8
import pytest

from lib.exceptions import PairingError
from lib.models.sentence import DepLabel, Token
from lib.utils.helpers import (
    DEFAULT_FUNCTION_WORD_UPOS,
    FunctionWordConfig,
    is_function_word,
    label_histogram,
    labels_match,
    sentence_keys,
    strip_subtype,
)


def test_strip_subtype():
    assert strip_subtype(DepLabel("nmod", "poss")) == DepLabel("nmod")


def test_labels_match_ignores_subtypes_by_default():
    """nsubj and nsubj:pass agree unless exact labels are requested."""
    assert labels_match(DepLabel("nsubj"), DepLabel("nsubj", "pass"))
    assert not labels_match(DepLabel("nsubj"), DepLabel("nsubj", "pass"), exact_labels=True)
    assert not labels_match(DepLabel("nsubj"), DepLabel("obj"))


def test_default_function_words():
    """PRON and NUM count as content words by default."""
    assert "ADP" in DEFAULT_FUNCTION_WORD_UPOS
    assert not is_function_word(Token(id=1, form="he", upos="PRON", head=0, deprel="root"))
    assert is_function_word(Token(id=1, form="the", upos="DET", head=0, deprel="root"))


def test_custom_function_words():
    config = FunctionWordConfig(frozenset({"PRON"}))
    assert is_function_word(Token(id=1, form="he", upos="PRON", head=0, deprel="root"), config)


def test_unknown_function_word_tag():
    with pytest.raises(ValueError, match="FOO"):
        FunctionWordConfig(frozenset({"FOO"}))


def test_label_histogram(erdogan_tree):
    """Every token counts once, root included."""
    histogram = label_histogram([erdogan_tree, erdogan_tree])
    assert histogram["obj"] == 4
    assert histogram["root"] == 2
    assert sum(histogram.values()) == 18


def test_label_histogram_exact(build_sentence):
    sentence = build_sentence([("a", "NOUN", 2, "nsubj:pass"), ("b", "VERB", 0, "root")])
    assert label_histogram([sentence])["nsubj"] == 1
    assert label_histogram([sentence], exact_labels=True)["nsubj:pass"] == 1


def test_sentence_keys(build_sentence):
    rows = [("a", "NOUN", 0, "root")]
    treebank = [build_sentence(rows, sent_id=None), build_sentence(rows, sent_id="s2"), build_sentence(rows, sent_id=None)]
    assert sentence_keys(treebank) == ["#1", "s2", "#3"]


def test_sentence_keys_reject_duplicates(build_sentence):
    rows = [("a", "NOUN", 0, "root")]
    with pytest.raises(PairingError) as excinfo:
        sentence_keys([build_sentence(rows), build_sentence(rows)])
    assert excinfo.value.orphans == ["s1"]
