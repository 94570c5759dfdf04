from .visualization import (
    RecordFormatter,
    TableFormatter,
    JSONFormatter,
    SummaryFormatter,
    create_formatter,
)

__all__ = [
    "RecordFormatter",
    "TableFormatter",
    "JSONFormatter",
    "SummaryFormatter",
    "create_formatter",
]
