# coding=utf-8
import itertools
import logging
from pathlib import Path

from lib.api.alignment_io import read_alignment_jsonl, read_pharaoh
from lib.api.annotation_io import read_process_annotation, read_snacs_annotation
from lib.api.conllu_io import ConlluReader, write_conllu_file
from lib.api.relation_io import (
    gold_relations,
    read_dictionary,
    read_instances,
    read_lexicon,
    read_predictions,
    write_dictionary,
    write_predictions,
)
from lib.api.report_io import write_records, write_report
from lib.exceptions import ConfigError, TreebankToolkitError
from lib.metrics import (
    LabelBias,
    attachment_scores,
    exclude_punctuation,
    pair_treebanks,
    paired_bootstrap,
    per_category_scores,
    sentence_outcomes,
    source_label_bias,
)
from lib.models.annotations import AdverbialTagSet
from lib.models.pattern import DEFAULT_SCHEME
from lib.models.run_config import RunConfig
from lib.models.sentence import Sentence
from lib.repattern import (
    TRANSFORMED_SCHEME,
    Setting,
    evaluate_setting,
    example_outcomes,
    predict,
    predict_ensemble,
    score,
    train,
    train_ensemble,
)
from lib.stability import StabilityConfig, category_distribution, classification_records, classify_treebank
from lib.transforms import transform_treebank
from lib.utils.helpers import FunctionWordConfig, label_histogram, sentence_keys
from lib.utils.report_helpers import (
    bootstrap_report,
    category_scores_report,
    distribution_report,
    histogram_report,
    re_scores_report,
    transform_report,
)

VALID_COMMANDS = (
    "stability",
    "transform",
    "histogram",
    "re_train",
    "re_predict",
    "re_score",
    "re_compare",
    "re_evaluate",
    "bootstrap",
)

RE_METRICS = ("precision", "recall", "f1")
PARSING_METRICS = ("uas", "las")


def get_valid_commands() -> tuple[str, ...]:
    return VALID_COMMANDS


def drop_sentences(sentences: list[Sentence], skipped: frozenset[int], dropped: frozenset[int]) -> list[Sentence]:
    """
    Remove the sentences at the `dropped` file positions from a treebank whose
    `skipped` positions are already missing.
    """
    positions = (n for n in itertools.count(1) if n not in skipped)
    return [sentence for sentence, position in zip(sentences, positions) if position not in dropped]


class CommandHandler:
    """
    Runs one sub-command against a RunConfig and writes its outputs. Every
    `<name>_command` method returns the paths it wrote.
    """

    def __init__(self, config: RunConfig):
        self.logger = logging.getLogger(__name__)
        self.config = config
        self.metadata = config.report_metadata()
        self.output_dir = Path(config.output_dir)

    def run(self, command: str) -> int:
        """
        Dispatch a command and turn its outcome into an exit code.

        :param command: one of VALID_COMMANDS.
        :return: 0 when every output was written, 1 otherwise.
        """
        self.logger.info(f"Handling command: {command}")
        if command not in get_valid_commands():
            self.logger.error(f"Invalid command {command!r}, expected one of {', '.join(VALID_COMMANDS)}")
            return 1
        action = getattr(self, command + "_command")
        try:
            written = action()
        except (TreebankToolkitError, OSError) as e:
            self.logger.error(f"{command} failed: {e}")
            return 1
        self.logger.info(f"{command} wrote {len(written)} files to {self.output_dir}")
        return 0

    # Inputs

    def _read_treebank(self, path: Path) -> tuple[list[Sentence], frozenset[int]]:
        """
        Read a treebank along with the 1-based positions of the sentences that
        lenient mode skipped.
        """
        reader = ConlluReader(strict=self.config.strict)
        sentences = reader.read_file(path)
        if reader.diagnostics:
            self.logger.warning(f"Skipped {len(reader.diagnostics)} malformed sentences in {path}")
        return sentences, frozenset(error.sentence_ordinal for error in reader.diagnostics)

    def _treebank(self, path: Path) -> list[Sentence]:
        return self._read_treebank(path)[0]

    def _predicted_treebank(self, path: Path, dropped: frozenset[int]) -> list[Sentence]:
        sentences, skipped = self._read_treebank(path)
        return drop_sentences(sentences, skipped, dropped)

    def _parallel_treebanks(self) -> tuple[list[Sentence], list[Sentence], frozenset[int]]:
        """
        Source and target gold, with every pair dropped where either side was
        malformed so positional alignments stay in step.
        """
        src, src_skipped = self._read_treebank(self.config.source)
        tgt, tgt_skipped = self._read_treebank(self.config.target_gold)
        dropped = src_skipped | tgt_skipped
        if dropped:
            self.logger.warning(f"Leaving out sentence pairs {sorted(dropped)}, malformed on one side")
        return drop_sentences(src, src_skipped, dropped), drop_sentences(tgt, tgt_skipped, dropped), dropped

    def _prediction_files(self, paths: list[Path]) -> list[Path]:
        files = []
        for path in paths:
            path = Path(path)
            files.extend(sorted(path.glob("*.conllu")) if path.is_dir() else [path])
        if not files:
            raise ConfigError(f"No prediction files found in {', '.join(str(p) for p in paths)}")
        return files

    def _alignments(self, src, tgt, dropped: frozenset[int] = frozenset()):
        if self.config.alignment_format == "jsonl":
            with open(self.config.alignments, encoding="utf-8") as stream:
                return read_alignment_jsonl(stream)
        with open(self.config.alignments, encoding="utf-8") as stream:
            return read_pharaoh(stream, src, tgt, self.config.zero_based_alignments, dropped)

    def _stability_config(self) -> StabilityConfig:
        if self.config.function_word_upos is None:
            return StabilityConfig(exact_labels=self.config.exact_labels)
        return StabilityConfig(FunctionWordConfig(frozenset(self.config.function_word_upos)), self.config.exact_labels)

    def _edge_filter(self):
        return exclude_punctuation if self.config.exclude_punct else None

    def _variant(self, instances_path: Path, parses_path: Path | None, what: str):
        if parses_path is None:
            raise ConfigError(f"The ensemble setting needs {what}_variant_parses")
        return read_instances(instances_path, parses=self._treebank(parses_path))

    # Commands

    def stability_command(self) -> list[Path]:
        self.config.require("source", "target_gold", "alignments")
        src, tgt, dropped = self._parallel_treebanks()
        alignments = self._alignments(src, tgt, dropped)
        classification = classify_treebank(src, tgt, alignments, self._stability_config())

        written = [write_records(self.output_dir / "stability.edges.jsonl", classification_records(classification))]
        distribution = category_distribution(classification)
        written += write_report(distribution_report(distribution, self.metadata), self.output_dir, "stability.distribution")

        if not self.config.predicted:
            return written
        self.config.require("predicted")
        runs, overall, bias = [], [], LabelBias(0, 0)
        for path in self._prediction_files(self.config.predicted):
            pairs = pair_treebanks(tgt, self._predicted_treebank(path, dropped))
            runs.append(per_category_scores(pairs, classification, self.config.exact_labels))
            overall.append(
                {"file": path.name, **attachment_scores(pairs, self._edge_filter(), self.config.exact_labels).to_dict()}
            )
            run_bias = source_label_bias(pairs, classification, src, alignments, self.config.exact_labels)
            bias = LabelBias(bias.source_labeled + run_bias.source_labeled, bias.label_errors + run_bias.label_errors)

        supervised = []
        if self.config.supervised_predicted:
            self.config.require("supervised_predicted")
            for path in self._prediction_files(self.config.supervised_predicted):
                supervised.append(
                    per_category_scores(
                        pair_treebanks(tgt, self._predicted_treebank(path, dropped)),
                        classification,
                        self.config.exact_labels,
                    )
                )

        report = category_scores_report(runs, self.metadata, supervised, bias)
        report.add_field("overall", overall)
        written += write_report(report, self.output_dir, "stability.scores")
        return written

    def transform_command(self) -> list[Path]:
        self.config.require("treebank")
        if self.config.transformation is None:
            raise ConfigError("transformation is not set")
        which = self.config.transformation
        process = snacs = None
        if self.config.process_annotation is not None:
            self.config.require("process_annotation")
            process = read_process_annotation(self.config.process_annotation)
        if self.config.snacs_annotation is not None:
            self.config.require("snacs_annotation")
            snacs = read_snacs_annotation(self.config.snacs_annotation)
        adverbial = AdverbialTagSet(frozenset(self.config.adverbial_tags)) if self.config.adverbial_tags else AdverbialTagSet()

        treebank = self._treebank(self.config.treebank)
        result = transform_treebank(
            treebank,
            which,
            process=process,
            snacs=snacs,
            adverbial=adverbial,
            harmonize=self.config.harmonize,
            allow_missing=self.config.allow_missing,
        )
        self.output_dir.mkdir(parents=True, exist_ok=True)
        output = self.output_dir / f"{Path(self.config.treebank).stem}.{which}.conllu"
        write_conllu_file(output, result.sentences)
        report = transform_report(which, result.diagnostics, len(result.sentences), self.metadata)
        return [output] + write_report(report, self.output_dir, f"transform.{which}")

    def histogram_command(self) -> list[Path]:
        self.config.require("treebank")
        histogram = label_histogram(self._treebank(self.config.treebank), self.config.exact_labels)
        return write_report(histogram_report(histogram, self.metadata), self.output_dir, "histogram")

    def re_train_command(self) -> list[Path]:
        self.config.require("train_instances", "lexicon")
        instances = read_instances(self.config.train_instances)
        lexicon = read_lexicon(self.config.lexicon)
        if self.config.setting == Setting.ENSEMBLE.value:
            variant = self._variant(self.config.train_instances, self.config.train_variant_parses, "train")
            dictionary = train_ensemble(
                instances, variant, lexicon, self.config.count_negatives, self.config.include_trigger_free
            )
        else:
            dictionary = train(
                instances, lexicon, self.config.scheme, self.config.count_negatives, self.config.include_trigger_free
            )
        self.output_dir.mkdir(parents=True, exist_ok=True)
        output = self.output_dir / "patterns.json"
        write_dictionary(output, dictionary)
        return [output]

    def re_predict_command(self) -> list[Path]:
        self.config.require("test_instances", "lexicon", "dictionary")
        lexicon = read_lexicon(self.config.lexicon)
        instances = read_instances(self.config.test_instances)
        dictionary = read_dictionary(self.config.dictionary, self.config.scheme)
        if self.config.setting == Setting.ENSEMBLE.value:
            variants = {
                instance.id: instance
                for instance in self._variant(self.config.test_instances, self.config.test_variant_parses, "test")
            }
            predictions = {
                instance.id: predict_ensemble(
                    instance,
                    variants[instance.id],
                    dictionary,
                    lexicon,
                    DEFAULT_SCHEME,
                    TRANSFORMED_SCHEME,
                    self.config.include_trigger_free,
                )
                for instance in instances
            }
        else:
            predictions = {
                instance.id: predict(instance, dictionary, lexicon, None, self.config.include_trigger_free)
                for instance in instances
            }
        self.output_dir.mkdir(parents=True, exist_ok=True)
        output = self.output_dir / "predictions.jsonl"
        write_predictions(output, predictions)
        return [output]

    def re_score_command(self) -> list[Path]:
        self.config.require("predictions", "test_instances")
        golds = gold_relations(read_instances(self.config.test_instances))
        name = Path(self.config.predictions).stem
        scores = {name: score(read_predictions(self.config.predictions), golds)}
        return write_report(re_scores_report(scores, self.metadata), self.output_dir, "re.scores")

    def _compare(self, predictions: dict, baseline: dict, golds: dict, names: tuple[str, str]) -> list[Path]:
        scores = {names[0]: score(baseline, golds), names[1]: score(predictions, golds)}
        written = write_report(re_scores_report(scores, self.metadata, baseline=names[0]), self.output_dir, "re.compare")
        ids, outcomes_a = example_outcomes(baseline, golds)
        _ids, outcomes_b = example_outcomes(predictions, golds)
        results = [
            paired_bootstrap(
                outcomes_a,
                outcomes_b,
                metric,
                self.config.n_resamples,
                self.config.seed,
                self.config.two_sided,
                ids,
            )
            for metric in RE_METRICS
        ]
        written += write_report(bootstrap_report(results, self.metadata, names), self.output_dir, "re.bootstrap")
        return written

    def re_compare_command(self) -> list[Path]:
        self.config.require("predictions", "baseline_predictions", "test_instances")
        golds = gold_relations(read_instances(self.config.test_instances))
        names = (Path(self.config.baseline_predictions).stem, Path(self.config.predictions).stem)
        if names[0] == names[1]:
            names = ("baseline", "system")
        return self._compare(
            read_predictions(self.config.predictions),
            read_predictions(self.config.baseline_predictions),
            golds,
            names,
        )

    def re_evaluate_command(self) -> list[Path]:
        self.config.require("train_instances", "test_instances", "lexicon")
        setting = Setting(self.config.setting)
        train_set = read_instances(self.config.train_instances)
        test_set = read_instances(self.config.test_instances)
        excluded = None
        if self.config.excluded_sources is not None:
            self.config.require("excluded_sources")
            with open(self.config.excluded_sources, encoding="utf-8") as stream:
                excluded = [line.strip() for line in stream if line.strip()]
        train_variant = test_variant = None
        if setting is Setting.ENSEMBLE:
            train_variant = self._variant(self.config.train_instances, self.config.train_variant_parses, "train")
            test_variant = self._variant(self.config.test_instances, self.config.test_variant_parses, "test")

        result = evaluate_setting(
            train_set,
            test_set,
            setting,
            read_lexicon(self.config.lexicon),
            excluded_sources=excluded,
            train_variant=train_variant,
            test_variant=test_variant,
            count_negatives=self.config.count_negatives,
            include_trigger_free=self.config.include_trigger_free,
        )
        self.output_dir.mkdir(parents=True, exist_ok=True)
        predictions_path = self.output_dir / f"predictions.{setting.value}.jsonl"
        dictionary_path = self.output_dir / f"patterns.{setting.value}.json"
        write_predictions(predictions_path, result.predictions)
        write_dictionary(dictionary_path, result.dictionary)
        report = re_scores_report({setting.value: result.scores}, self.metadata, extra={"setting": result.to_dict()})
        written = [predictions_path, dictionary_path]
        written += write_report(report, self.output_dir, f"re.{setting.value}")
        if self.config.baseline_predictions is not None:
            self.config.require("baseline_predictions")
            written += self._compare(
                result.predictions,
                read_predictions(self.config.baseline_predictions),
                gold_relations(test_set),
                ("baseline", setting.value),
            )
        return written

    def bootstrap_command(self) -> list[Path]:
        self.config.require("gold", "system_a", "system_b")
        gold = self._treebank(self.config.gold)
        pairs_a = pair_treebanks(gold, self._treebank(self.config.system_a))
        pairs_b = pair_treebanks(gold, self._treebank(self.config.system_b))
        unit_ids = sentence_keys(gold)
        outcomes_a = sentence_outcomes(pairs_a, self._edge_filter(), self.config.exact_labels)
        outcomes_b = sentence_outcomes(pairs_b, self._edge_filter(), self.config.exact_labels)
        results = [
            paired_bootstrap(
                outcomes_a,
                outcomes_b,
                metric,
                self.config.n_resamples,
                self.config.seed,
                self.config.two_sided,
                unit_ids,
            )
            for metric in PARSING_METRICS
        ]
        names = (Path(self.config.system_a).stem, Path(self.config.system_b).stem)
        return write_report(bootstrap_report(results, self.metadata, names), self.output_dir, "bootstrap")
