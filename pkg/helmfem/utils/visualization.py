"""Formatters for study records: data files, JSON and console summaries."""

import json
import math
from abc import ABC, abstractmethod
from typing import Dict, Sequence, Type

from ..core.models import StudyRecord

RECORD_COLUMNS = ("f", "hmax", "err", "nor", "dofs", "seconds")


class RecordFormatter(ABC):
    """Abstract base class for study record formatters."""

    @abstractmethod
    def format_records(self, records: Sequence[StudyRecord]) -> str:
        """Render a sequence of records."""
        pass


class TableFormatter(RecordFormatter):
    """Whitespace-separated data table with a header row; floats round-trip exactly."""

    def format_records(self, records: Sequence[StudyRecord]) -> str:
        lines = [" ".join(RECORD_COLUMNS)]
        for rec in records:
            lines.append(
                f"{float(rec.f)!r} {float(rec.hmax)!r} {float(rec.err)!r} {float(rec.nor)!r} "
                f"{int(rec.dofs):d} {float(rec.wall_seconds)!r}"
            )
        return "\n".join(lines) + "\n"


class JSONFormatter(RecordFormatter):
    def format_records(self, records: Sequence[StudyRecord]) -> str:
        rows = [dict(rec.to_dict(), relative=rec.relative) for rec in records]
        return json.dumps(rows, indent=2)


class SummaryFormatter(RecordFormatter):
    """Console table with k, relative error and the observed rate between rows."""

    def format_records(self, records: Sequence[StudyRecord]) -> str:
        header = (
            f"{'f':>7} {'k':>9} {'hmax':>9} {'dofs':>9} "
            f"{'relative':>11} {'rate':>6} {'sec':>8}"
        )
        lines = [header, "-" * len(header)]
        previous = None
        for rec in records:
            rate = ""
            if previous is not None and previous.hmax != rec.hmax and rec.relative > 0:
                slope = math.log(previous.relative / rec.relative) / math.log(
                    previous.hmax / rec.hmax
                )
                rate = f"{slope:6.2f}"
            lines.append(
                f"{rec.f:7.3f} {rec.wavenumber:9.4f} {rec.hmax:9.5f} {rec.dofs:9d} "
                f"{rec.relative:11.4e} {rate:>6} {rec.wall_seconds:8.2f}"
            )
            previous = rec
        return "\n".join(lines)


_FORMATTERS: Dict[str, Type[RecordFormatter]] = {
    "table": TableFormatter,
    "json": JSONFormatter,
    "summary": SummaryFormatter,
}


def create_formatter(name: str) -> RecordFormatter:
    try:
        return _FORMATTERS[name.lower()]()
    except KeyError:
        supported = ", ".join(_FORMATTERS)
        raise ValueError(
            f"Unknown formatter: '{name}'. Available formatters: {supported}"
        ) from None
