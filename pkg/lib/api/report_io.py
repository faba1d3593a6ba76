# coding=utf-8
import logging
from pathlib import Path
from typing import Iterable

import jsonlines

from lib.models.report import Report

logger = logging.getLogger(__name__)


def write_report(report: Report, output_dir: str | Path, stem: str) -> list[Path]:
    """
    Write `<stem>.json`, `<stem>.txt` and one `<stem>.<table>.csv` per table.
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name: str, content: str):
        path = output_dir / name
        with open(path, "w", encoding="utf-8", newline="\n") as stream:
            stream.write(content)
        written.append(path)

    emit(f"{stem}.json", report.to_json())
    emit(f"{stem}.txt", report.to_text())
    for table in report.tables:
        emit(f"{stem}.{table.name}.csv", report.table_csv(table.name))
    logger.info(f"Wrote {len(written)} report files for {stem} to {output_dir}")
    return written


def write_records(path: str | Path, records: Iterable[dict]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with jsonlines.open(path, mode="w", sort_keys=True) as writer:
        writer.write_all(records)
    return path
