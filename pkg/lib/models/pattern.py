# coding=utf-8
import re
from collections import Counter
from dataclasses import dataclass, field

from lib.exceptions import PatternSyntaxError
from lib.models.sentence import DepLabel, Direction, Path, PathStep

_TOKEN = re.compile(r'"[^"]*"|<|>|\S+')
_DIRECTIONS = {direction.value: direction for direction in Direction}

DEFAULT_SCHEME = "vanilla"


def _steps(path: Path) -> tuple[PathStep, ...]:
    return tuple(PathStep(step.direction, step.label.strip_subtype()) for step in path.steps)


@dataclass(frozen=True)
class Pattern:
    """
    A dependency path between two typed entities, optionally anchored on a
    trigger word:

        PERSON < nsubj "per_residence" > obj > compound CITY
    """

    subj_type: str
    steps_to_trigger: tuple[PathStep, ...]
    obj_type: str
    trigger_type: str | None = None
    steps_from_trigger: tuple[PathStep, ...] = ()

    def __post_init__(self):
        if self.trigger_type is None and self.steps_from_trigger:
            raise PatternSyntaxError("Steps after the trigger need a trigger")

    @classmethod
    def from_paths(
        cls, subj_type: str, first: Path, obj_type: str, trigger_type: str = None, second: Path = None
    ) -> "Pattern":
        return cls(
            subj_type=subj_type,
            steps_to_trigger=_steps(first),
            obj_type=obj_type,
            trigger_type=trigger_type,
            steps_from_trigger=_steps(second) if second is not None else (),
        )

    @property
    def hops(self) -> int:
        return len(self.steps_to_trigger) + len(self.steps_from_trigger)

    def render(self) -> str:
        parts = [self.subj_type]
        parts.extend(step.render() for step in self.steps_to_trigger)
        if self.trigger_type is not None:
            parts.append(f'"{self.trigger_type}"')
            parts.extend(step.render() for step in self.steps_from_trigger)
        parts.append(self.obj_type)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        tokens = _TOKEN.findall(text)
        if len(tokens) < 2:
            raise PatternSyntaxError(f"Pattern {text!r} needs a subject and an object type")
        subj_type, *middle, obj_type = tokens
        for entity in (subj_type, obj_type):
            if entity in _DIRECTIONS or entity.startswith('"'):
                raise PatternSyntaxError(f"Pattern {text!r}: {entity!r} is not an entity type")

        before: list[PathStep] = []
        after: list[PathStep] = []
        trigger_type = None
        current = before
        position = 0
        while position < len(middle):
            item = middle[position]
            if item.startswith('"'):
                if trigger_type is not None:
                    raise PatternSyntaxError(f"Pattern {text!r} has more than one trigger")
                trigger_type = item[1:-1]
                if not trigger_type:
                    raise PatternSyntaxError(f"Pattern {text!r} has an empty trigger type")
                current = after
                position += 1
                continue
            if item not in _DIRECTIONS:
                raise PatternSyntaxError(f"Pattern {text!r}: expected '<' or '>' before {item!r}")
            if position + 1 >= len(middle):
                raise PatternSyntaxError(f"Pattern {text!r}: {item!r} lacks a label")
            label = middle[position + 1]
            if label in _DIRECTIONS or label.startswith('"'):
                raise PatternSyntaxError(f"Pattern {text!r}: {item!r} lacks a label")
            try:
                current.append(PathStep(_DIRECTIONS[item], DepLabel.from_string(label)))
            except ValueError as error:
                raise PatternSyntaxError(f"Pattern {text!r}: {error}") from error
            position += 2

        return cls(subj_type, tuple(before), obj_type, trigger_type, tuple(after))


@dataclass
class PatternDictionary:
    """
    Relation counts per pattern, kept apart per annotation scheme so one
    dictionary can serve both single-scheme and pooled lookups.
    """

    counts: dict[str, dict[str, Counter]] = field(default_factory=dict)

    def add(self, pattern: Pattern | str, relation: str, scheme: str = DEFAULT_SCHEME, count: int = 1):
        if count < 1:
            raise ValueError(f"Counts must be positive, got {count}")
        key = pattern.render() if isinstance(pattern, Pattern) else pattern
        self.counts.setdefault(scheme, {}).setdefault(key, Counter())[relation] += count

    @property
    def schemes(self) -> list[str]:
        return sorted(self.counts)

    def _selected(self, scheme: str | None) -> list[dict[str, Counter]]:
        if scheme is None:
            return [self.counts[name] for name in self.schemes]
        return [self.counts.get(scheme, {})]

    def lookup(self, pattern: Pattern | str, scheme: str = None) -> Counter:
        """
        Relation counts of a pattern in one scheme, or pooled over all of them.
        """
        key = pattern.render() if isinstance(pattern, Pattern) else pattern
        pooled = Counter()
        for table in self._selected(scheme):
            pooled.update(table.get(key, Counter()))
        return pooled

    def relation_totals(self, scheme: str = None) -> Counter:
        totals = Counter()
        for table in self._selected(scheme):
            for relations in table.values():
                totals.update(relations)
        return totals

    def patterns(self, scheme: str = None) -> list[str]:
        return sorted({key for table in self._selected(scheme) for key in table})

    def __len__(self) -> int:
        return len(self.patterns())

    def merge(self, other: "PatternDictionary") -> "PatternDictionary":
        merged = PatternDictionary()
        for source in (self, other):
            for scheme, table in source.counts.items():
                for key, relations in table.items():
                    for relation, count in relations.items():
                        merged.add(key, relation, scheme, count)
        return merged

    def to_dict(self) -> dict:
        def dump(table: dict[str, Counter]) -> dict:
            return {key: dict(sorted(table[key].items())) for key in sorted(table)}

        if not self.counts:
            return {}
        if len(self.counts) == 1:
            (table,) = self.counts.values()
            return dump(table)
        return {"schemes": {scheme: dump(self.counts[scheme]) for scheme in self.schemes}}

    @classmethod
    def from_dict(cls, data: dict, scheme: str = DEFAULT_SCHEME) -> "PatternDictionary":
        """
        :param scheme: tag for a plain `{pattern: {relation: count}}` map.
        """
        tables = data["schemes"] if "schemes" in data else {scheme: data}
        dictionary = cls()
        for name, table in tables.items():
            for key, relations in table.items():
                Pattern.parse(key)
                for relation, count in relations.items():
                    dictionary.add(key, relation, name, int(count))
        return dictionary
