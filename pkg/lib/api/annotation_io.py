# coding=utf-8
from pathlib import Path

import jsonlines

from lib.models.annotations import ProcessAnnotation, SnacsAnnotation


def read_process_annotation(path: str | Path) -> ProcessAnnotation:
    with jsonlines.open(path) as reader:
        return ProcessAnnotation.from_records(reader)


def read_snacs_annotation(path: str | Path) -> SnacsAnnotation:
    with jsonlines.open(path) as reader:
        return SnacsAnnotation.from_records(reader)
