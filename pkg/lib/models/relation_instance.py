# coding=utf-8
from dataclasses import dataclass, replace

from lib.exceptions import AnnotationError
from lib.models.sentence import Sentence

NO_RELATION = "no_relation"


@dataclass(frozen=True, kw_only=True)
class RelationInstance:
    """
    One subject/object pair in a parsed sentence. Spans are 1-based token id
    ranges with both ends included.
    """

    id: str
    tokens: tuple[str, ...]
    subj_span: tuple[int, int]
    obj_span: tuple[int, int]
    subj_type: str
    obj_type: str
    parse: Sentence
    gold_relation: str | None = None
    source_id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "subj_span", tuple(self.subj_span))
        object.__setattr__(self, "obj_span", tuple(self.obj_span))
        n = len(self.tokens)
        for name, (start, end) in (("subject", self.subj_span), ("object", self.obj_span)):
            if not 1 <= start <= end <= n:
                raise AnnotationError(
                    f"Instance {self.id}: {name} span {start}-{end} is outside 1..{n}"
                )
        if self.subj_ids & self.obj_ids:
            raise AnnotationError(f"Instance {self.id}: subject and object spans overlap")
        forms = tuple(token.form for token in self.parse.tokens)
        if forms != self.tokens:
            raise AnnotationError(f"Instance {self.id}: parse tokens differ from instance tokens")

    @property
    def subj_ids(self) -> frozenset[int]:
        return frozenset(range(self.subj_span[0], self.subj_span[1] + 1))

    @property
    def obj_ids(self) -> frozenset[int]:
        return frozenset(range(self.obj_span[0], self.obj_span[1] + 1))

    @property
    def origin(self) -> str:
        """
        The sentence this instance was translated from, or its own id.
        """
        return self.source_id if self.source_id is not None else self.id

    def with_parse(self, parse: Sentence) -> "RelationInstance":
        return replace(self, parse=parse)

    def to_dict(self) -> dict:
        data = {
            "id": self.id,
            "tokens": list(self.tokens),
            "subj_span": list(self.subj_span),
            "obj_span": list(self.obj_span),
            "subj_type": self.subj_type,
            "obj_type": self.obj_type,
        }
        if self.gold_relation is not None:
            data["relation"] = self.gold_relation
        if self.source_id is not None:
            data["source_id"] = self.source_id
        return data

    @classmethod
    def from_dict(cls, data: dict, parse: Sentence) -> "RelationInstance":
        """
        Accepts 1-based `subj_span`/`obj_span` or TACRED-style 0-based
        `subj_start`/`subj_end`/`obj_start`/`obj_end`.
        """
        try:
            if "subj_span" in data:
                subj_span, obj_span = data["subj_span"], data["obj_span"]
            else:
                subj_span = (data["subj_start"] + 1, data["subj_end"] + 1)
                obj_span = (data["obj_start"] + 1, data["obj_end"] + 1)
            return cls(
                id=str(data["id"]),
                tokens=data["tokens"],
                subj_span=subj_span,
                obj_span=obj_span,
                subj_type=data["subj_type"],
                obj_type=data["obj_type"],
                parse=parse,
                gold_relation=data.get("relation"),
                source_id=data.get("source_id"),
            )
        except KeyError as error:
            raise AnnotationError(f"Instance {data.get('id')} lacks field {error}") from error
