# coding=utf-8
from dataclasses import dataclass

from lib.exceptions import AlignmentError
from lib.models.sentence import Sentence


@dataclass(frozen=True, order=True)
class AlignmentLink:
    src_id: int
    tgt_id: int


@dataclass(frozen=True)
class SentenceAlignment:
    """
    Word links between a source sentence and its translation. Links are
    many-to-many; duplicates collapse because they are kept in a frozenset.
    """

    src_sent_id: str | None
    tgt_sent_id: str | None
    links: frozenset[AlignmentLink] = frozenset()

    def __post_init__(self):
        links = frozenset(
            link if isinstance(link, AlignmentLink) else AlignmentLink(*link)
            for link in self.links
        )
        object.__setattr__(self, "links", links)

    def sources_of(self, tgt_id: int) -> tuple[int, ...]:
        return tuple(sorted(link.src_id for link in self.links if link.tgt_id == tgt_id))

    def source_map(self) -> dict[int, tuple[int, ...]]:
        """
        Map every linked target token to its sorted source tokens.
        """
        mapping: dict[int, list[int]] = {}
        for link in sorted(self.links):
            mapping.setdefault(link.tgt_id, []).append(link.src_id)
        return {tgt_id: tuple(src_ids) for tgt_id, src_ids in mapping.items()}

    def inverted(self) -> "SentenceAlignment":
        return SentenceAlignment(
            src_sent_id=self.tgt_sent_id,
            tgt_sent_id=self.src_sent_id,
            links=frozenset(AlignmentLink(link.tgt_id, link.src_id) for link in self.links),
        )

    def validate(self, src: Sentence, tgt: Sentence):
        for link in sorted(self.links):
            if not 1 <= link.src_id <= len(src) or not 1 <= link.tgt_id <= len(tgt):
                raise AlignmentError(
                    f"Alignment {self.src_sent_id}->{self.tgt_sent_id}: link "
                    f"{link.src_id}-{link.tgt_id} is out of range for sentences of "
                    f"length {len(src)} and {len(tgt)}"
                )

    def to_dict(self) -> dict:
        return {
            "src_sent_id": self.src_sent_id,
            "tgt_sent_id": self.tgt_sent_id,
            "links": [[link.src_id, link.tgt_id] for link in sorted(self.links)],
        }

    @classmethod
    def from_dict(cls, data) -> "SentenceAlignment":
        return cls(
            src_sent_id=data.get("src_sent_id"),
            tgt_sent_id=data.get("tgt_sent_id"),
            links=frozenset(AlignmentLink(int(s), int(t)) for s, t in data.get("links", [])),
        )
