# coding=utf-8
from dataclasses import dataclass, field

from lib.models.sentence import PLACEHOLDER, Token


@dataclass(frozen=True)
class TriggerLexicon:
    """
    Relation-indicative words per trigger type. Matching is per token, on the
    case-folded form or lemma, so multi-word entries never fire.
    """

    entries: dict[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        entries = {}
        for trigger_type, surfaces in self.entries.items():
            if not trigger_type:
                raise ValueError("Trigger type names must not be empty")
            folded = frozenset(surface.casefold() for surface in surfaces if surface.strip())
            if not folded:
                raise ValueError(f"Trigger type {trigger_type!r} has no surface strings")
            entries[trigger_type] = folded
        object.__setattr__(self, "entries", entries)

        index: dict[str, set[str]] = {}
        for trigger_type, surfaces in entries.items():
            for surface in surfaces:
                index.setdefault(surface, set()).add(trigger_type)
        object.__setattr__(self, "_index", {key: tuple(sorted(value)) for key, value in index.items()})

    def __len__(self) -> int:
        return len(self.entries)

    def match(self, token: Token) -> tuple[str, ...]:
        """
        Trigger types the token evokes, in name order.
        """
        keys = {token.form.casefold()}
        if token.lemma != PLACEHOLDER:
            keys.add(token.lemma.casefold())
        found = set()
        for key in keys:
            found.update(self._index.get(key, ()))
        return tuple(sorted(found))

    def to_rows(self) -> list[tuple[str, str]]:
        return [
            (trigger_type, surface)
            for trigger_type in sorted(self.entries)
            for surface in sorted(self.entries[trigger_type])
        ]

    @classmethod
    def from_rows(cls, rows) -> "TriggerLexicon":
        entries: dict[str, set[str]] = {}
        for trigger_type, surface in rows:
            entries.setdefault(trigger_type, set()).add(surface)
        return cls({trigger_type: frozenset(surfaces) for trigger_type, surfaces in entries.items()})
