# coding=utf-8
import json
import logging
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import jsonlines

from lib.api.conllu_io import parse_conllu, read_conllu_file, serialize_sentence
from lib.exceptions import AnnotationError, ConfigError
from lib.models.pattern import DEFAULT_SCHEME, PatternDictionary
from lib.models.relation_instance import RelationInstance
from lib.models.sentence import Sentence
from lib.models.trigger_lexicon import TriggerLexicon


class InstanceReader:
    """
    Reads relation instances from JSON lines. Each record carries its parse
    either inline (`conllu`) or as a reference to a CoNLL-U file
    (`conllu_file`, plus `sent_id` when it differs from the instance id).
    A `parses` treebank given to the reader overrides both, matched on sent_id.
    """

    def __init__(self, parses: Sequence[Sentence] | None = None):
        self.logger = logging.getLogger(__name__)
        self.parses = {sentence.sent_id: sentence for sentence in parses} if parses is not None else None
        self._files: dict[Path, dict[str, Sentence]] = {}

    def read(self, path: str | Path) -> list[RelationInstance]:
        path = Path(path)
        with jsonlines.open(path) as reader:
            instances = [self._instance(record, path.parent) for record in reader]
        self.logger.info(f"Read {len(instances)} relation instances from {path}")
        return instances

    def _instance(self, record: dict, base: Path) -> RelationInstance:
        return RelationInstance.from_dict(record, self._parse(record, base))

    def _parse(self, record: dict, base: Path) -> Sentence:
        sent_id = str(record.get("sent_id", record.get("id")))
        if self.parses is not None:
            if sent_id not in self.parses:
                raise AnnotationError(f"No parse for instance {record.get('id')} (sent_id {sent_id})")
            return self.parses[sent_id]
        if "conllu" in record:
            sentences = parse_conllu(record["conllu"])
            if len(sentences) != 1:
                raise AnnotationError(
                    f"Instance {record.get('id')} embeds {len(sentences)} sentences, expected one"
                )
            return sentences[0]
        if "conllu_file" in record:
            treebank = self._load(base / record["conllu_file"])
            if sent_id not in treebank:
                raise AnnotationError(f"{record['conllu_file']} has no sentence {sent_id}")
            return treebank[sent_id]
        raise AnnotationError(f"Instance {record.get('id')} has no parse")

    def _load(self, path: Path) -> dict[str, Sentence]:
        if path not in self._files:
            self._files[path] = {sentence.sent_id: sentence for sentence in read_conllu_file(path)}
        return self._files[path]


def read_instances(path: str | Path, parses: Sequence[Sentence] | None = None) -> list[RelationInstance]:
    return InstanceReader(parses).read(path)


def write_instances(path: str | Path, instances: Iterable[RelationInstance], embed_parses: bool = True):
    with jsonlines.open(path, mode="w", sort_keys=True) as writer:
        for instance in instances:
            record = instance.to_dict()
            if embed_parses:
                record["conllu"] = serialize_sentence(instance.parse)
            writer.write(record)


def read_lexicon(path: str | Path) -> TriggerLexicon:
    """
    TSV with one `trigger_type<TAB>surface` pair per line; blank lines and
    lines starting with `#` are ignored.
    """
    rows = []
    with open(path, encoding="utf-8") as stream:
        for line_number, line in enumerate(stream, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            columns = line.split("\t")
            if len(columns) != 2 or not columns[0] or not columns[1].strip():
                raise ConfigError(f"{path}, line {line_number}: expected trigger_type<TAB>surface")
            rows.append((columns[0], columns[1]))
    return TriggerLexicon.from_rows(rows)


def read_dictionary(path: str | Path, scheme: str = DEFAULT_SCHEME) -> PatternDictionary:
    with open(path, encoding="utf-8") as stream:
        return PatternDictionary.from_dict(json.load(stream), scheme)


def write_dictionary(path: str | Path, dictionary: PatternDictionary):
    with open(path, "w", encoding="utf-8", newline="\n") as stream:
        json.dump(dictionary.to_dict(), stream, indent=2, sort_keys=True, ensure_ascii=False)
        stream.write("\n")


def read_predictions(path: str | Path) -> dict[str, str]:
    with jsonlines.open(path) as reader:
        return {str(record["id"]): record["relation"] for record in reader}


def write_predictions(path: str | Path, predictions: Mapping[str, str]):
    with jsonlines.open(path, mode="w", sort_keys=True) as writer:
        writer.write_all({"id": example_id, "relation": predictions[example_id]} for example_id in sorted(predictions))


def gold_relations(instances: Iterable[RelationInstance]) -> dict[str, str]:
    golds = {}
    for instance in instances:
        if instance.gold_relation is None:
            raise AnnotationError(f"Instance {instance.id} has no gold relation")
        golds[instance.id] = instance.gold_relation
    return golds
