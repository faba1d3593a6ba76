# coding=utf-8
import csv
import io
import json
from dataclasses import dataclass, field


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


@dataclass
class ReportTable:
    name: str
    headers: list[str]
    rows: list[list] = field(default_factory=list)
    caption: str | None = None

    def to_dict(self) -> dict:
        return {
            "caption": self.caption,
            "headers": list(self.headers),
            "rows": [list(row) for row in self.rows],
        }


class Report:
    """
    The output of one command, rendered as canonical JSON, CSV tables and
    aligned plain text.
    """

    def __init__(self, title: str, metadata: dict = None, fields: dict = None, tables: list = None):
        """
        :param title: Heading of the text rendering.
        :param metadata: Run provenance (config hash, seed, version).
        :param fields: Optional. Free-form JSON-ready values.
        :param tables: Optional. A list of ReportTable.
        """
        self.title = title
        self.metadata = metadata if metadata is not None else {}
        self.fields = fields if fields is not None else {}
        self.tables: list[ReportTable] = tables if tables is not None else []

    def add_field(self, key: str, value):
        self.fields[key] = value

    def add_table(self, name: str, headers: list[str], rows: list[list], caption: str = None):
        """
        Add a table to the report.

        :param name: Identifier, also used for the CSV file name.
        :param headers: Column titles.
        :param rows: Cell values; floats are rounded in text and CSV only.
        :param caption: Optional. One line shown above the text table.
        """
        if any(table.name == name for table in self.tables):
            raise ValueError(f"Report already has a table named {name!r}")
        self.tables.append(ReportTable(name, list(headers), [list(row) for row in rows], caption))

    def table(self, name: str) -> ReportTable:
        for table in self.tables:
            if table.name == name:
                return table
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "metadata": dict(self.metadata),
            "fields": dict(self.fields),
            "tables": {table.name: table.to_dict() for table in self.tables},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def table_csv(self, name: str) -> str:
        table = self.table(name)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(table.headers)
        writer.writerows([format_cell(cell) for cell in row] for row in table.rows)
        return buffer.getvalue()

    def to_text(self) -> str:
        lines = [self.title, "=" * len(self.title)]
        lines.extend(f"{key}: {self.metadata[key]}" for key in sorted(self.metadata))
        for key in sorted(self.fields):
            value = self.fields[key]
            if not isinstance(value, (dict, list)):
                lines.append(f"{key}: {format_cell(value)}")
        for table in self.tables:
            lines.append("")
            if table.caption:
                lines.append(table.caption)
            cells = [table.headers] + [[format_cell(cell) for cell in row] for row in table.rows]
            widths = [max(len(row[i]) for row in cells) for i in range(len(table.headers))]
            for index, row in enumerate(cells):
                lines.append(
                    "  ".join(
                        cell.ljust(width) if column == 0 else cell.rjust(width)
                        for column, (cell, width) in enumerate(zip(row, widths))
                    ).rstrip()
                )
                if index == 0:
                    lines.append("  ".join("-" * width for width in widths))
        return "\n".join(lines) + "\n"
