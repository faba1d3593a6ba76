# coding=utf-8
from typing import Iterable

import networkx as nx

from lib.models.sentence import Direction, Path, PathStep, Sentence


def dependency_graph(sentence: Sentence) -> nx.Graph:
    """
    The tree as an undirected graph over token ids (the artificial root 0 is
    left out; the tokens alone are already connected).
    """
    graph = nx.Graph()
    graph.add_nodes_from(token.id for token in sentence.tokens)
    graph.add_edges_from((token.head, token.id) for token in sentence.tokens if token.head != 0)
    return graph


def _path_from_nodes(sentence: Sentence, nodes: list[int]) -> Path:
    steps = []
    for current, following in zip(nodes, nodes[1:]):
        current_token = sentence.token(current)
        if current_token.head == following:
            steps.append(PathStep(Direction.UP, current_token.deprel))
        else:
            steps.append(PathStep(Direction.DOWN, sentence.token(following).deprel))
    return Path(nodes=tuple(nodes), steps=tuple(steps))


def _check_ids(sentence: Sentence, ids: frozenset[int], name: str):
    if not ids:
        raise ValueError(f"{name} must not be empty")
    outside = [token_id for token_id in ids if not 1 <= token_id <= len(sentence)]
    if outside:
        raise ValueError(f"{name} {sorted(outside)} are outside sentence {sentence.sent_id}")


def shortest_path(
    sentence: Sentence,
    from_ids: Iterable[int],
    to_ids: Iterable[int],
    graph: nx.Graph = None,
) -> Path | None:
    """
    Shortest undirected path between any token of `from_ids` and any token of
    `to_ids`. Ties go to the smallest (from, to) pair by position, then to the
    smallest step string. Overlapping sets give the zero-length path at the
    smallest shared id.

    :param graph: optional prebuilt `dependency_graph(sentence)`.
    """
    from_ids = frozenset(from_ids)
    to_ids = frozenset(to_ids)
    _check_ids(sentence, from_ids, "from_ids")
    _check_ids(sentence, to_ids, "to_ids")

    shared = from_ids & to_ids
    if shared:
        return Path(nodes=(min(shared),))

    graph = graph if graph is not None else dependency_graph(sentence)
    best_key = None
    best_path = None
    for source in sorted(from_ids):
        paths = nx.single_source_shortest_path(graph, source)
        for target in sorted(to_ids):
            if target not in paths:
                continue
            path = _path_from_nodes(sentence, paths[target])
            key = (len(path), source, target, path.step_string(exact_labels=True))
            if best_key is None or key < best_key:
                best_key = key
                best_path = path
    return best_path
