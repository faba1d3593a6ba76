# coding=utf-8
import logging
from typing import Collection, Iterable, Sequence, TextIO

import jsonlines

from lib.exceptions import AlignmentError
from lib.models.alignment import AlignmentLink, SentenceAlignment
from lib.models.sentence import Sentence
from lib.utils.helpers import sentence_keys

logger = logging.getLogger(__name__)


def parse_pharaoh_line(line: str, zero_based: bool = False) -> frozenset[AlignmentLink]:
    """
    Parse one `i-j i-j ...` line; i indexes the source, j the target.
    """
    offset = 1 if zero_based else 0
    links = set()
    for pair in line.split():
        src, sep, tgt = pair.partition("-")
        if not sep or not src.isdigit() or not tgt.isdigit():
            raise AlignmentError(f"Invalid alignment pair {pair!r}")
        links.add(AlignmentLink(int(src) + offset, int(tgt) + offset))
    return frozenset(links)


def read_pharaoh(
    stream: TextIO | Iterable[str],
    src_treebank: Sequence[Sentence],
    tgt_treebank: Sequence[Sentence],
    zero_based: bool = False,
    skip: Collection[int] = (),
) -> list[SentenceAlignment]:
    """
    Read Pharaoh alignments paired with the treebanks by position: line k
    aligns sentence k of the source with sentence k of the target.

    :param skip: 1-based line numbers to drop, for sentence pairs that were
        left out of both treebanks.
    """
    skip = frozenset(skip)
    lines = [
        (line_number, line.rstrip("\r\n"))
        for line_number, line in enumerate(stream, start=1)
        if line_number not in skip
    ]
    if len(src_treebank) != len(tgt_treebank):
        raise AlignmentError(
            f"Treebanks differ in length: {len(src_treebank)} source vs {len(tgt_treebank)} target"
        )
    if len(lines) != len(tgt_treebank):
        raise AlignmentError(
            f"Alignment file has {len(lines)} lines for {len(tgt_treebank)} sentence pairs"
        )
    alignments = []
    pairs = zip(lines, sentence_keys(src_treebank), src_treebank, sentence_keys(tgt_treebank), tgt_treebank)
    for (line_number, line), src_key, src, tgt_key, tgt in pairs:
        try:
            links = parse_pharaoh_line(line, zero_based)
        except AlignmentError as e:
            raise AlignmentError(f"line {line_number}: {e}") from e
        alignment = SentenceAlignment(src_key, tgt_key, links)
        alignment.validate(src, tgt)
        alignments.append(alignment)
    logger.info(f"Read {len(alignments)} Pharaoh alignments")
    return alignments


def read_alignment_jsonl(stream: TextIO) -> list[SentenceAlignment]:
    with jsonlines.Reader(stream) as reader:
        return [SentenceAlignment.from_dict(record) for record in reader]


def format_pharaoh(alignments: Iterable[SentenceAlignment], zero_based: bool = False) -> str:
    offset = 1 if zero_based else 0
    lines = []
    for alignment in alignments:
        lines.append(
            " ".join(
                f"{link.src_id - offset}-{link.tgt_id - offset}" for link in sorted(alignment.links)
            )
        )
    return "".join(line + "\n" for line in lines)
