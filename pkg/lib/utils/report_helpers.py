# coding=utf-8
from collections import Counter
from typing import Mapping, Sequence

from lib.metrics import LabelBias, aggregate_runs, normalized_difference
from lib.models.edge_category import CATEGORY_ORDER
from lib.models.report import Report
from lib.models.scores import BootstrapResult, CategoryScores, MeanStd, REScores
from lib.stability import CategoryDistribution
from lib.transforms import TransformDiagnostics

METRIC_NAMES = {"uas": "UAS", "las": "LAS", "precision": "P", "recall": "R", "f1": "F1"}


def mean_std(cell: MeanStd) -> str:
    return f"{100 * cell.mean:.1f} ± {100 * cell.std:.1f}"


def points(value: float, signed: bool = False) -> str:
    return f"{100 * value:+.1f}" if signed else f"{100 * value:.1f}"


def distribution_report(distribution: CategoryDistribution, metadata: dict) -> Report:
    report = Report("Edge category distribution", metadata)
    report.add_field("distribution", distribution.to_dict())
    percentages = distribution.percentages
    report.add_table(
        "distribution",
        ["Category", "Edges", "%"],
        [
            [category.display_name, distribution.counts[category], f"{percentages[category]:.1f}"]
            for category in CATEGORY_ORDER
        ]
        + [["Total", distribution.total, "100.0"]],
        caption=f"{distribution.total} target edges",
    )
    return report


def _scores_table(report: Report, name: str, runs: Sequence[CategoryScores], caption: str):
    aggregated = aggregate_runs(runs)
    report.add_field(name, aggregated.to_dict())
    report.add_table(
        name,
        ["Category", "Edges", "UAS", "LAS"],
        [
            [
                category.display_name,
                runs[0][category].n_edges,
                mean_std(aggregated.cells[category]["uas"]),
                mean_std(aggregated.cells[category]["las"]),
            ]
            for category in CATEGORY_ORDER
        ],
        caption=caption,
    )
    return aggregated


def category_scores_report(
    runs: Sequence[CategoryScores],
    metadata: dict,
    supervised_runs: Sequence[CategoryScores] = None,
    label_bias: LabelBias = None,
) -> Report:
    """
    Per-category UAS/LAS as mean ± std over runs, optionally next to a
    supervised system and the normalized gap between the two.

    :param runs: one CategoryScores per prediction file.
    :param supervised_runs: Optional. Scores of in-language trained parsers.
    :param label_bias: Optional. Source-label share among label errors.
    """
    report = Report("Attachment scores per edge category", metadata)
    report.add_field("n_runs", len(runs))
    zero_shot = _scores_table(report, "category_scores", runs, f"Mean ± std over {len(runs)} runs")

    if supervised_runs:
        supervised = _scores_table(
            report, "supervised_scores", supervised_runs, f"Supervised, {len(supervised_runs)} runs"
        )
        difference = normalized_difference(zero_shot, supervised)
        report.add_field(
            "normalized_difference",
            {category.value: values for category, values in difference.items()},
        )
        report.add_table(
            "normalized_difference",
            ["Category", "UAS", "LAS"],
            [
                [
                    category.display_name,
                    points(difference[category]["uas"], signed=True),
                    points(difference[category]["las"], signed=True),
                ]
                for category in CATEGORY_ORDER
            ],
            caption="Zero-shot minus supervised, each relative to its Fully Aligned score",
        )

    if label_bias is not None:
        report.add_field("source_label_bias", label_bias.to_dict())
    return report


def re_scores_report(
    scores: Mapping[str, REScores], metadata: dict, baseline: str = None, extra: dict = None
) -> Report:
    """
    :param scores: system name -> scores.
    :param baseline: Optional. Name of the system the others are compared to.
    """
    report = Report("Relation extraction scores", metadata)
    report.add_field("scores", {name: value.to_dict() for name, value in scores.items()})
    for key, value in (extra or {}).items():
        report.add_field(key, value)
    report.add_table(
        "scores",
        ["System", "P", "R", "F1"],
        [[name, points(s.precision), points(s.recall), points(s.f1)] for name, s in scores.items()],
    )
    if baseline is not None:
        reference = scores[baseline]
        deltas = {
            name: {
                "precision": s.precision - reference.precision,
                "recall": s.recall - reference.recall,
                "f1": s.f1 - reference.f1,
            }
            for name, s in scores.items()
            if name != baseline
        }
        report.add_field("deltas", deltas)
        report.add_table(
            "deltas",
            ["System", "ΔP", "ΔR", "ΔF1"],
            [
                [name, *(points(delta[metric], signed=True) for metric in ("precision", "recall", "f1"))]
                for name, delta in deltas.items()
            ],
            caption=f"Difference to {baseline}",
        )
    return report


def bootstrap_report(results: Sequence[BootstrapResult], metadata: dict, systems: tuple[str, str]) -> Report:
    """
    One row per metric with the observed difference and its p-value.
    """
    report = Report("Paired bootstrap", metadata)
    report.add_field("systems", {"a": systems[0], "b": systems[1]})
    report.add_field("results", [result.to_dict() for result in results])
    first = results[0]
    sidedness = "two-sided" if first.two_sided else "one-sided"
    report.add_table(
        "p_values",
        ["Metric", "Δ", "p-value"],
        [
            [METRIC_NAMES[result.metric], points(result.observed_delta, signed=True), f"{result.p_value:.4f}"]
            for result in results
        ],
        caption=f"{systems[1]} vs {systems[0]}, {first.n_resamples} resamples of {first.n_units} units, {sidedness}",
    )
    return report


def transform_report(which: str, diagnostics: TransformDiagnostics, n_sentences: int, metadata: dict) -> Report:
    report = Report(f"{which.capitalize()} transformation", metadata)
    report.add_field("transformation", which)
    report.add_field("sentences", n_sentences)
    report.add_field("diagnostics", diagnostics.to_dict())
    report.add_table(
        "rules",
        ["Rule", "Edges"],
        [[rule, count] for rule, count in sorted(diagnostics.rule_counts.items())],
    )
    return report


def histogram_report(histogram: Counter, metadata: dict) -> Report:
    total = sum(histogram.values())
    report = Report("Dependency label histogram", metadata)
    report.add_field("total", total)
    report.add_field("labels", dict(sorted(histogram.items())))
    rows = sorted(histogram.items(), key=lambda item: (-item[1], item[0]))
    report.add_table(
        "labels",
        ["Label", "Count", "%"],
        [[label, count, f"{100 * count / total:.1f}" if total else "0.0"] for label, count in rows],
    )
    return report
