# coding=utf-8
import logging
import re
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from conllu.exceptions import ParseException
from conllu.parser import DEFAULT_FIELD_PARSERS, DEFAULT_FIELDS, parse_comment_line, parse_line

from lib.exceptions import ConlluFormatError, TreeStructureError
from lib.models.sentence import PLACEHOLDER, InertLine, Sentence, Token

COLUMN_COUNT = 10
INTEGER = re.compile(r"^\d+$")

# DEPS and MISC stay opaque strings; enhanced graphs are never interpreted.
FIELD_PARSERS = {
    **DEFAULT_FIELD_PARSERS,
    "deps": lambda line, i: line[i],
    "misc": lambda line, i: line[i],
}


def _lines(source: TextIO | str | Iterable[str]) -> Iterator[str]:
    if isinstance(source, str):
        source = source.splitlines()
    for line in source:
        yield line.rstrip("\r\n")


def _blocks(lines: Iterator[str]) -> Iterator[list[tuple[int, str]]]:
    block = []
    for line_number, line in enumerate(lines, start=1):
        if line.strip():
            block.append((line_number, line))
        elif block:
            yield block
            block = []
    if block:
        yield block


class ConlluReader:
    """
    Reads CoNLL-U treebanks into validated `Sentence` objects.

    In strict mode the first malformed sentence aborts the read. In lenient
    mode the sentence is skipped and the error is kept in `diagnostics`.
    """

    def __init__(self, strict: bool = True):
        self.logger = logging.getLogger(__name__)
        self.strict = strict
        self.diagnostics: list[ConlluFormatError] = []

    def read(self, source: TextIO | str | Iterable[str]) -> list[Sentence]:
        sentences = []
        for ordinal, block in enumerate(_blocks(_lines(source)), start=1):
            try:
                sentences.append(self.parse_block(block, ordinal))
            except ConlluFormatError as e:
                if self.strict:
                    raise
                self.logger.warning(f"Skipping sentence: {e}")
                self.diagnostics.append(e)
        return sentences

    def read_file(self, path: str | Path) -> list[Sentence]:
        with open(path, encoding="utf-8", newline="") as stream:
            return self.read(stream)

    def parse_block(self, block: list[tuple[int, str]], ordinal: int) -> Sentence:
        comments = []
        metadata = {}
        tokens = []
        extras = []
        for line_number, line in block:
            if line.startswith("#"):
                comments.append(line)
                try:
                    pairs = parse_comment_line(line)
                except (ParseException, ValueError) as e:
                    raise ConlluFormatError(f"unreadable comment: {e}", ordinal, line_number) from e
                for key, value in pairs:
                    if key in ("sent_id", "text") and value is not None:
                        metadata[key] = value
                continue

            columns = line.split("\t")
            if len(columns) != COLUMN_COUNT:
                raise ConlluFormatError(
                    f"expected {COLUMN_COUNT} tab-separated columns, found {len(columns)}",
                    ordinal,
                    line_number,
                )
            if not INTEGER.match(columns[0]):
                if "-" in columns[0] or "." in columns[0]:
                    extras.append(InertLine(len(tokens), line))
                    continue
                raise ConlluFormatError(f"invalid token id {columns[0]!r}", ordinal, line_number)
            if not INTEGER.match(columns[6]):
                raise ConlluFormatError(f"non-integer head {columns[6]!r}", ordinal, line_number)
            if int(columns[0]) != len(tokens) + 1:
                raise ConlluFormatError(
                    f"duplicate or gapped id {columns[0]}, expected {len(tokens) + 1}",
                    ordinal,
                    line_number,
                )
            tokens.append(self._parse_token(line, ordinal, line_number))

        first_line = block[0][0]
        if not tokens:
            raise ConlluFormatError("sentence has no tokens", ordinal, first_line)
        try:
            return Sentence(
                sent_id=metadata.get("sent_id"),
                text=metadata.get("text"),
                tokens=tokens,
                comments=comments,
                extras=extras,
            )
        except TreeStructureError as e:
            raise ConlluFormatError(str(e), ordinal, first_line) from e

    def _parse_token(self, line: str, ordinal: int, line_number: int) -> Token:
        try:
            fields = parse_line(line, DEFAULT_FIELDS, FIELD_PARSERS)
            return Token(
                id=fields["id"],
                form=fields["form"],
                lemma=fields["lemma"] or PLACEHOLDER,
                upos=fields["upos"] or PLACEHOLDER,
                xpos=fields["xpos"],
                feats=tuple((fields["feats"] or {}).items()),
                head=fields["head"],
                deprel=fields["deprel"],
                deps=fields["deps"] or PLACEHOLDER,
                misc=fields["misc"] or PLACEHOLDER,
            )
        except (ParseException, TreeStructureError, ValueError) as e:
            raise ConlluFormatError(str(e), ordinal, line_number) from e


def parse_conllu(source: TextIO | str | Iterable[str], strict: bool = True) -> list[Sentence]:
    return ConlluReader(strict=strict).read(source)


def serialize_sentence(sentence: Sentence) -> str:
    lines = list(sentence.comments)
    if not lines:
        if sentence.sent_id is not None:
            lines.append(f"# sent_id = {sentence.sent_id}")
        if sentence.text is not None:
            lines.append(f"# text = {sentence.text}")
    extras = sorted(sentence.extras, key=lambda extra: extra.position)
    pending = 0
    for position, token in enumerate(sentence.tokens):
        while pending < len(extras) and extras[pending].position <= position:
            lines.append(extras[pending].line)
            pending += 1
        lines.append(token.to_conllu_line())
    lines.extend(extra.line for extra in extras[pending:])
    return "\n".join(lines) + "\n\n"


def serialize_conllu(sentences: Iterable[Sentence]) -> str:
    return "".join(serialize_sentence(sentence) for sentence in sentences)


def read_conllu_file(path: str | Path, strict: bool = True) -> list[Sentence]:
    return ConlluReader(strict=strict).read_file(path)


def write_conllu_file(path: str | Path, sentences: Iterable[Sentence]):
    with open(path, "w", encoding="utf-8", newline="\n") as stream:
        stream.write(serialize_conllu(sentences))
