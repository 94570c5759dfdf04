"""Reading and writing study data files."""

from pathlib import Path
from typing import List, Sequence, Union

from ..core.errors import ParameterError
from ..core.models import StudyRecord
from ..utils.visualization import RECORD_COLUMNS, TableFormatter


def write_records(path: Union[str, Path], records: Sequence[StudyRecord]) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(TableFormatter().format_records(records))


def read_records(path: Union[str, Path]) -> List[StudyRecord]:
    lines = [line.split() for line in Path(path).read_text().splitlines() if line.strip()]
    if not lines:
        raise ParameterError(f"Empty study file: {path}")
    header = lines[0]
    missing = [c for c in ("f", "hmax", "err", "nor") if c not in header]
    if missing:
        raise ParameterError(f"Study file {path} lacks columns: {', '.join(missing)}")
    col = {name: header.index(name) for name in RECORD_COLUMNS if name in header}
    records = []
    for row in lines[1:]:
        records.append(
            StudyRecord(
                f=float(row[col["f"]]),
                hmax=float(row[col["hmax"]]),
                err=float(row[col["err"]]),
                nor=float(row[col["nor"]]),
                dofs=int(row[col["dofs"]]) if "dofs" in col else 0,
                wall_seconds=float(row[col["seconds"]]) if "seconds" in col else 0.0,
            )
        )
    return records
