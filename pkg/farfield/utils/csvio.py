"""
Far-field CSV curves and JSON comparison reports
"""
import csv
import math
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
from pydantic import TypeAdapter

from farfield.core.exceptions import FieldFileError
from farfield.models.scenario import ComparisonReport
from farfield.utils.fieldfile import line_at_offset

CURVE_COLUMNS = ("x_m", "y_m", "abs_p", "phase_deg")
APERTURE_COLUMNS = ("subset_size",) + CURVE_COLUMNS

PathLike = Union[str, Path]
_reports = TypeAdapter(List[ComparisonReport])


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _curve_rows(x, y, values) -> List[List[str]]:
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.broadcast_to(np.asarray(y, dtype=float), x.shape)
    values = np.asarray(values).reshape(-1)
    # Magnitude-only predictions carry zero phase.
    phase = np.degrees(np.angle(values)) if np.iscomplexobj(values) else np.zeros(values.shape)
    return [
        [_fmt(xi), _fmt(yi), _fmt(abs(vi)), _fmt(ph)]
        for xi, yi, vi, ph in zip(x, y, values, phase)
    ]


def write_curve(path: PathLike, x, y, values) -> None:
    """One row per far-field point: x_m, y_m, abs_p, phase_deg"""
    with Path(path).open("w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(CURVE_COLUMNS)
        w.writerows(_curve_rows(x, y, values))


def write_aperture_curves(path: PathLike, x, y, curves: Dict[int, np.ndarray]) -> None:
    """Hold-max curves stacked by subset size"""
    with Path(path).open("w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(APERTURE_COLUMNS)
        for size in curves:
            for row in _curve_rows(x, y, curves[size]):
                w.writerow([str(size)] + row)


def read_curve(path: PathLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Read a curve CSV back as (x, y, abs_p, phase_deg) arrays"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise FieldFileError(f"not UTF-8 text: {exc.reason}", line=line_at_offset(path, exc.start)) from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows or tuple(rows[0]) != CURVE_COLUMNS:
        raise FieldFileError(f"expected header {','.join(CURVE_COLUMNS)}", line=1)
    data = []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(CURVE_COLUMNS):
            raise FieldFileError(f"expected {len(CURVE_COLUMNS)} columns, got {len(row)}", line=line_no)
        try:
            values = [float(v) for v in row]
        except ValueError:
            raise FieldFileError(f"non-numeric value in {row!r}", line=line_no) from None
        if not all(math.isfinite(v) for v in values):
            raise FieldFileError("non-finite value", line=line_no)
        data.append(values)
    if not data:
        raise FieldFileError("curve has no rows", line=len(rows) + 1)
    arr = np.array(data)
    return arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]


def write_reports(path: PathLike, reports: Sequence[ComparisonReport]) -> None:
    """Reports as an indented JSON list"""
    Path(path).write_bytes(_reports.dump_json(list(reports), indent=2) + b"\n")


def read_reports(path: PathLike) -> List[ComparisonReport]:
    return _reports.validate_json(Path(path).read_bytes())
