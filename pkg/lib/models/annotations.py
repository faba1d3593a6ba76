# coding=utf-8
from dataclasses import dataclass, field

from lib.exceptions import AnnotationError
from lib.models.sentence import Sentence

DEFAULT_ADVERBIAL_TAGS = frozenset(
    {
        "Locus",
        "Time",
        "EndTime",
        "Goal",
        "Source",
        "Purpose",
        "Duration",
        "Circumstance",
        "ComparisonRef",
        "Manner",
        "Extent",
    }
)


def normalize_supersense(label: str) -> str:
    """
    Supersenses come as `p.Locus` from taggers and as `Locus` from hand-made
    files; both spellings mean the same tag.
    """
    label = label.strip()
    return label[2:] if label.startswith("p.") else label


@dataclass(frozen=True)
class AdverbialTagSet:
    tags: frozenset[str] = DEFAULT_ADVERBIAL_TAGS

    def __post_init__(self):
        tags = frozenset(normalize_supersense(tag) for tag in self.tags)
        if not tags:
            raise ValueError("Adverbial tag set must not be empty")
        object.__setattr__(self, "tags", tags)

    def __contains__(self, supersense: str) -> bool:
        return normalize_supersense(supersense) in self.tags


def _check_bounds(sent_id: str, token_ids, sentence: Sentence, kind: str):
    outside = sorted(token_id for token_id in token_ids if not 1 <= token_id <= len(sentence))
    if outside:
        raise AnnotationError(f"{kind} for sentence {sent_id} refers to missing tokens {outside}")


@dataclass(frozen=True)
class ProcessAnnotation:
    """
    Tokens heading Process-evoking subtrees, per sentence.
    """

    heads: dict[str, frozenset[int]] = field(default_factory=dict)

    def get(self, sent_id: str) -> frozenset[int] | None:
        return self.heads.get(sent_id)

    def check(self, sentence: Sentence):
        heads = self.heads.get(sentence.sent_id)
        if heads:
            _check_bounds(sentence.sent_id, heads, sentence, "Process annotation")

    def to_records(self) -> list[dict]:
        return [
            {"sent_id": sent_id, "process_heads": sorted(heads)}
            for sent_id, heads in self.heads.items()
        ]

    @classmethod
    def from_records(cls, records) -> "ProcessAnnotation":
        return cls(
            {
                record["sent_id"]: frozenset(int(i) for i in record.get("process_heads", []))
                for record in records
            }
        )


@dataclass(frozen=True)
class SnacsAnnotation:
    """
    Adposition supersenses, per sentence and token.
    """

    supersenses: dict[str, dict[int, str]] = field(default_factory=dict)

    def get(self, sent_id: str) -> dict[int, str] | None:
        return self.supersenses.get(sent_id)

    def check(self, sentence: Sentence):
        senses = self.supersenses.get(sentence.sent_id)
        if senses:
            _check_bounds(sentence.sent_id, senses, sentence, "Supersense annotation")

    def to_records(self) -> list[dict]:
        return [
            {"sent_id": sent_id, "supersenses": {str(k): v for k, v in sorted(senses.items())}}
            for sent_id, senses in self.supersenses.items()
        ]

    @classmethod
    def from_records(cls, records) -> "SnacsAnnotation":
        return cls(
            {
                record["sent_id"]: {
                    int(token_id): normalize_supersense(label)
                    for token_id, label in record.get("supersenses", {}).items()
                }
                for record in records
            }
        )
