# coding=utf-8
from dataclasses import dataclass

from lib.models.edge_category import CATEGORY_ORDER, EdgeCategory


@dataclass(frozen=True)
class AttachmentScores:
    uas: float
    las: float
    n_edges: int

    def __post_init__(self):
        if self.las > self.uas:
            raise ValueError(f"LAS {self.las} exceeds UAS {self.uas}")

    def to_dict(self) -> dict:
        return {"uas": self.uas, "las": self.las, "n_edges": self.n_edges}


@dataclass(frozen=True)
class CategoryScores:
    """
    Attachment scores restricted to the edges of each stability category.
    """

    scores: dict[EdgeCategory, AttachmentScores]

    def __getitem__(self, category: EdgeCategory) -> AttachmentScores:
        return self.scores[category]

    @property
    def total_edges(self) -> int:
        return sum(score.n_edges for score in self.scores.values())

    def to_dict(self) -> dict:
        return {category.value: self.scores[category].to_dict() for category in CATEGORY_ORDER}


@dataclass(frozen=True)
class MeanStd:
    mean: float
    std: float

    def to_dict(self) -> dict:
        return {"mean": self.mean, "std": self.std}


@dataclass(frozen=True)
class AggregatedCategoryScores:
    """
    Mean and population standard deviation of each (category, metric) cell
    over several model runs.
    """

    n_runs: int
    cells: dict[EdgeCategory, dict[str, MeanStd]]

    def to_dict(self) -> dict:
        return {
            "n_runs": self.n_runs,
            "cells": {
                category.value: {metric: cell.to_dict() for metric, cell in self.cells[category].items()}
                for category in CATEGORY_ORDER
            },
        }


@dataclass(frozen=True)
class BootstrapResult:
    p_value: float
    n_resamples: int
    seed: int
    observed_delta: float
    metric: str = "f1"
    two_sided: bool = False
    n_units: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "p_value": self.p_value,
            "observed_delta": self.observed_delta,
            "n_resamples": self.n_resamples,
            "n_units": self.n_units,
            "seed": self.seed,
            "two_sided": self.two_sided,
        }


@dataclass(frozen=True)
class REScores:
    precision: float
    recall: float
    f1: float
    predicted_positive: int
    gold_positive: int
    correct: int

    @classmethod
    def from_counts(cls, predicted_positive: int, gold_positive: int, correct: int) -> "REScores":
        precision = correct / predicted_positive if predicted_positive else 0.0
        recall = correct / gold_positive if gold_positive else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return cls(precision, recall, f1, predicted_positive, gold_positive, correct)

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "predicted_positive": self.predicted_positive,
            "gold_positive": self.gold_positive,
            "correct": self.correct,
        }
