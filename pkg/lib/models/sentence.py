# coding=utf-8
from dataclasses import dataclass, replace
from enum import Enum

import networkx as nx

from lib.exceptions import TreeStructureError

UPOS_TAGS = frozenset(
    {
        "ADJ",
        "ADP",
        "ADV",
        "AUX",
        "CCONJ",
        "DET",
        "INTJ",
        "NOUN",
        "NUM",
        "PART",
        "PRON",
        "PROPN",
        "PUNCT",
        "SCONJ",
        "SYM",
        "VERB",
        "X",
    }
)
PLACEHOLDER = "_"
ROOT_LABEL = "root"


@dataclass(frozen=True)
class DepLabel:
    """
    A dependency relation, split into its universal part and optional subtype.
    """

    universal: str
    subtype: str | None = None

    def __post_init__(self):
        if not self.universal or ":" in self.universal:
            raise ValueError(f"Invalid universal relation: {self.universal!r}")
        if self.subtype == "":
            raise ValueError("Empty subtype, use None instead")

    @classmethod
    def from_string(cls, value: str) -> "DepLabel":
        universal, _, subtype = value.partition(":")
        return cls(universal, subtype or None)

    def strip_subtype(self) -> "DepLabel":
        if self.subtype is None:
            return self
        return DepLabel(self.universal)

    def __str__(self) -> str:
        if self.subtype is None:
            return self.universal
        return f"{self.universal}:{self.subtype}"


@dataclass(frozen=True, kw_only=True)
class Token:
    """
    One syntactic word of a sentence.
    """

    id: int
    form: str
    lemma: str = PLACEHOLDER
    upos: str = PLACEHOLDER
    xpos: str | None = None
    feats: tuple[tuple[str, str], ...] = ()
    head: int
    deprel: DepLabel
    deps: str = PLACEHOLDER
    misc: str = PLACEHOLDER

    def __post_init__(self):
        if isinstance(self.deprel, str):
            object.__setattr__(self, "deprel", DepLabel.from_string(self.deprel))
        if isinstance(self.feats, dict):
            object.__setattr__(self, "feats", tuple(self.feats.items()))
        if self.id < 1:
            raise TreeStructureError(f"Token id must be positive, got {self.id}")
        if self.head < 0:
            raise TreeStructureError(f"Token {self.id} has negative head {self.head}")
        if self.head == self.id:
            raise TreeStructureError(f"Token {self.id} is its own head")
        if self.upos != PLACEHOLDER and self.upos not in UPOS_TAGS:
            raise TreeStructureError(f"Token {self.id} has unknown UPOS {self.upos!r}")

    def relabel(self, label: DepLabel) -> "Token":
        return replace(self, deprel=label)

    def to_conllu_line(self) -> str:
        feats = "|".join(key if not value else f"{key}={value}" for key, value in self.feats)
        return "\t".join(
            [
                str(self.id),
                self.form,
                self.lemma,
                self.upos,
                self.xpos if self.xpos is not None else PLACEHOLDER,
                feats or PLACEHOLDER,
                str(self.head),
                str(self.deprel),
                self.deps,
                self.misc,
            ]
        )


@dataclass(frozen=True)
class Edge:
    head_id: int
    dep_id: int
    label: DepLabel


class Direction(Enum):
    UP = "<"
    DOWN = ">"


@dataclass(frozen=True)
class PathStep:
    """
    One hop of a path. UP moves from a dependent to its head, DOWN from a head
    to its dependent; the label is always the dependent's relation.
    """

    direction: Direction
    label: DepLabel

    def render(self, exact_labels: bool = False) -> str:
        label = self.label if exact_labels else self.label.strip_subtype()
        return f"{self.direction.value} {label}"


@dataclass(frozen=True)
class Path:
    nodes: tuple[int, ...]
    steps: tuple[PathStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def start(self) -> int:
        return self.nodes[0]

    @property
    def end(self) -> int:
        return self.nodes[-1]

    def step_string(self, exact_labels: bool = False) -> str:
        return " ".join(step.render(exact_labels) for step in self.steps)


@dataclass(frozen=True)
class InertLine:
    """
    A multiword-token range or empty-node line, kept verbatim for output.

    :param position: number of regular tokens printed before this line.
    """

    position: int
    line: str


@dataclass(frozen=True, kw_only=True)
class Sentence:
    """
    A basic dependency tree. Construction validates the tree, so every
    instance in circulation has ids 1..n and a single root.
    """

    sent_id: str | None = None
    text: str | None = None
    tokens: tuple[Token, ...]
    comments: tuple[str, ...] = ()
    extras: tuple[InertLine, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "comments", tuple(self.comments))
        object.__setattr__(self, "extras", tuple(self.extras))
        self._validate()

    def _validate(self):
        n = len(self.tokens)
        ids = [token.id for token in self.tokens]
        if ids != list(range(1, n + 1)):
            raise TreeStructureError(
                f"Sentence {self.sent_id}: token ids must be 1..{n} in order, got {ids}"
            )
        for token in self.tokens:
            if token.head > n:
                raise TreeStructureError(
                    f"Sentence {self.sent_id}: token {token.id} points to missing head {token.head}"
                )
        roots = [token for token in self.tokens if token.head == 0]
        if len(roots) != 1:
            raise TreeStructureError(
                f"Sentence {self.sent_id}: expected exactly one root, found {len(roots)}"
            )
        if roots[0].deprel.universal != ROOT_LABEL:
            raise TreeStructureError(
                f"Sentence {self.sent_id}: root token {roots[0].id} is labeled {roots[0].deprel}"
            )
        graph = nx.DiGraph()
        graph.add_nodes_from(range(n + 1))
        graph.add_edges_from((token.head, token.id) for token in self.tokens)
        if not nx.is_directed_acyclic_graph(graph):
            cycle = [head for head, _dep in nx.find_cycle(graph)]
            raise TreeStructureError(
                f"Sentence {self.sent_id}: cycle through tokens {sorted(cycle)}"
            )

    def __len__(self) -> int:
        return len(self.tokens)

    def token(self, token_id: int) -> Token:
        if not 1 <= token_id <= len(self.tokens):
            raise KeyError(f"Sentence {self.sent_id} has no token {token_id}")
        return self.tokens[token_id - 1]

    def root(self) -> Token:
        return next(token for token in self.tokens if token.head == 0)

    def heads(self) -> tuple[int, ...]:
        return tuple(token.head for token in self.tokens)

    def children(self, token_id: int) -> tuple[Token, ...]:
        return tuple(token for token in self.tokens if token.head == token_id)

    def edges(self) -> tuple[Edge, ...]:
        """
        One edge per non-root token, in dependent order.
        """
        return tuple(
            Edge(token.head, token.id, token.deprel)
            for token in self.tokens
            if token.head != 0
        )

    def has_edge(self, head_id: int, dep_id: int) -> bool:
        return 1 <= dep_id <= len(self.tokens) and self.tokens[dep_id - 1].head == head_id

    def with_labels(self, labels: dict[int, DepLabel]) -> "Sentence":
        """
        Return a copy where the tokens in `labels` carry new relations.
        Heads and every other field are left alone.
        """
        if not labels:
            return self
        tokens = tuple(
            token.relabel(labels[token.id]) if token.id in labels else token
            for token in self.tokens
        )
        return replace(self, tokens=tokens)
