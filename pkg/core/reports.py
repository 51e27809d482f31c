"""Report emission: JSON lines for machines, CSV for tables, aligned text for people."""

import csv
import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Generator, Iterable, Optional

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["name", "q", "params", "count", "predicted", "match"]


def _params_text(params: dict) -> str:
    """Compact, key-sorted JSON."""
    return json.dumps(params, sort_keys=True, separators=(",", ":"))


def canonical_order(records: Iterable[dict]) -> list[dict]:
    """Sort records by (name, params, q) so reruns emit identical bytes."""
    return sorted(records, key=lambda r: (r["name"], _params_text(r.get("params", {})), r["q"]))


def format_table(records: Iterable[dict], columns: Optional[list[str]] = None) -> str:
    """Render records as aligned columns, one per line.

    Args:
        records: Report records.
        columns: Keys to show (default: the CSV columns).

    Returns:
        The table as a single string.
    """
    columns = columns or CSV_COLUMNS
    rows = [columns]
    for record in records:
        row = []
        for column in columns:
            value = record.get(column)
            if column == "params" and isinstance(value, dict):
                value = ", ".join(f"{k}={v}" for k, v in value.items())
            row.append("" if value is None else str(value))
        rows.append(row)

    # pad every column to its widest cell
    widths = [max(len(row[i]) for row in rows) for i in range(len(columns))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines)


class ReportWriter:
    """Writes the records of one command run under a report directory."""

    def __init__(self, directory: str = "reports", jsonl: bool = True, csv_tables: bool = True):
        """Initialize the writer.

        Args:
            directory: Directory for report files, created if missing.
            jsonl: Write <command>.jsonl.
            csv_tables: Write <command>.csv.
        """
        self.directory = Path(directory)
        self.jsonl = jsonl
        self.csv_tables = csv_tables
        self.logger = logging.getLogger(self.__class__.__name__)
        self._init_dir()

    def _init_dir(self) -> None:
        if not self.directory.exists():
            self.directory.mkdir(parents=True, exist_ok=True)
            self.logger.info(f"Created report directory: {self.directory}")

    @contextmanager
    def _open(self, path: Path) -> Generator[Any, None, None]:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            yield handle
        self.logger.debug(f"Wrote {path}")

    def write(self, command: str, records: Iterable[dict]) -> list[Path]:
        """Write the records of a run, replacing earlier reports of the same command.

        Args:
            command: CLI command name, used as the file stem.
            records: Report records; written in canonical order.

        Returns:
            Paths written.
        """
        records = canonical_order(records)
        written = []

        # JSON lines: one record per line, keys sorted
        if self.jsonl:
            path = self.directory / f"{command}.jsonl"
            with self._open(path) as handle:
                for record in records:
                    handle.write(json.dumps(record, sort_keys=True) + "\n")
            written.append(path)

        # CSV: fixed columns, params as compact JSON
        if self.csv_tables:
            path = self.directory / f"{command}.csv"
            with self._open(path) as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(CSV_COLUMNS)
                for record in records:
                    writer.writerow([
                        _params_text(record.get("params", {})) if c == "params" else record.get(c, "")
                        for c in CSV_COLUMNS
                    ])
            written.append(path)

        self.logger.info(f"{command}: {len(records)} records written to {self.directory}")
        return written


def read_jsonl(path: str) -> list[dict]:
    """Load a JSON-lines report."""
    with open(path, encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]
