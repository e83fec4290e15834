"""
Text serialization of sampled near fields

    FARFIELD-FIELD
    format_version 1
    kind planar|line
    frequency <Hz>
    sound_speed <m/s>
    z_plane <m>
    y0 <m>            (line only)
    N <count>
    J <count>         (planar only)
    x y re im
    <one record per node, x-major>
"""
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np
from pydantic import ValidationError

from farfield.core.exceptions import FieldFileError
from farfield.models.field import LineField, PlanarField
from farfield.models.grid import LineGrid, PlanarGrid

MAGIC = "FARFIELD-FIELD"
FORMAT_VERSION = 1
COLUMNS = "x y re im"

_REQUIRED = {
    "planar": ("format_version", "kind", "frequency", "sound_speed", "z_plane", "N", "J"),
    "line": ("format_version", "kind", "frequency", "sound_speed", "z_plane", "y0", "N"),
}

AnyField = Union[PlanarField, LineField]


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _header(field: AnyField) -> List[str]:
    if isinstance(field, PlanarField):
        N, J = field.grid.shape
        extra = [f"N {N}", f"J {J}"]
        kind = "planar"
    else:
        extra = [f"y0 {_fmt(field.grid.y0)}", f"N {field.grid.size}"]
        kind = "line"
    return [
        MAGIC,
        f"format_version {FORMAT_VERSION}",
        f"kind {kind}",
        f"frequency {_fmt(field.frequency)}",
        f"sound_speed {_fmt(field.sound_speed)}",
        f"z_plane {_fmt(field.grid.z_plane)}",
        *extra,
        COLUMNS,
    ]


def _records(field: AnyField) -> np.ndarray:
    if isinstance(field, PlanarField):
        N, J = field.grid.shape
        x = np.repeat(field.grid.x_coords, J)
        y = np.tile(field.grid.y_coords, N)
    else:
        x = field.grid.x_coords
        y = np.full(x.size, field.grid.y0)
    p = field.values.reshape(-1)
    return np.column_stack([x, y, p.real, p.imag])


def write_field(field: AnyField, path: Union[str, Path]) -> None:
    """Write a field file; identical fields produce identical bytes"""
    np.savetxt(
        Path(path),
        _records(field),
        fmt="%.17g",
        header="\n".join(_header(field)),
        comments="",
        encoding="utf-8",
    )


def line_at_offset(path: Union[str, Path], offset: int) -> int:
    """1-based line number holding the given byte offset"""
    return Path(path).read_bytes()[:offset].count(b"\n") + 1


def _parse_number(text: str, line_no: int, integer: bool = False):
    try:
        return int(text) if integer else float(text)
    except ValueError:
        raise FieldFileError(f"not a number: {text!r}", line=line_no) from None


def _read_header(lines: List[str]) -> Tuple[Dict[str, str], Dict[str, int], int]:
    if not lines or lines[0].strip() != MAGIC:
        raise FieldFileError(f"missing {MAGIC} signature", line=1)
    header: Dict[str, str] = {}
    where: Dict[str, int] = {}
    for index in range(1, len(lines)):
        text = lines[index].strip()
        line_no = index + 1
        if text == COLUMNS:
            return header, where, index + 1
        parts = text.split()
        if len(parts) != 2:
            raise FieldFileError(f"malformed header entry {text!r}", line=line_no)
        key, value = parts
        if key in header:
            raise FieldFileError(f"duplicate header key {key!r}", line=line_no)
        header[key] = value
        where[key] = line_no
        if key == "kind" and value not in _REQUIRED:
            raise FieldFileError(f"unknown field kind {value!r}", line=line_no)
    raise FieldFileError(f"missing column line {COLUMNS!r}", line=len(lines) + 1)


def read_field(path: Union[str, Path]) -> AnyField:
    """
    Parse a field file.

    Raises:
        FieldFileError: malformed header, wrong record count, kind mismatch or
            coordinates that are not strictly ascending; the message names the
            offending line
    """
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except UnicodeDecodeError as exc:
        raise FieldFileError(f"not UTF-8 text: {exc.reason}", line=line_at_offset(path, exc.start)) from exc
    header, where, first_record = _read_header(lines)
    columns_line = first_record

    kind = header.get("kind")
    if kind is None:
        raise FieldFileError("header has no kind", line=columns_line)
    allowed = _REQUIRED[kind]
    for key in header:
        if key not in allowed:
            raise FieldFileError(f"key {key!r} does not belong in a {kind} file", line=where[key])
    for key in allowed:
        if key not in header:
            raise FieldFileError(f"header is missing {key!r}", line=columns_line)

    version = _parse_number(header["format_version"], columns_line, integer=True)
    if version != FORMAT_VERSION:
        raise FieldFileError(f"unsupported format_version {version}", line=columns_line)
    N = _parse_number(header["N"], columns_line, integer=True)
    J = _parse_number(header["J"], columns_line, integer=True) if kind == "planar" else 1
    if N < 1 or J < 1:
        raise FieldFileError("node counts must be positive", line=columns_line)

    expected = N * J
    body = [(i + 1, text) for i, text in enumerate(lines) if i >= first_record and text.strip()]
    if len(body) < expected:
        last = body[-1][0] if body else columns_line
        raise FieldFileError(f"missing record {len(body) + 1} of {expected}", line=last + 1)
    if len(body) > expected:
        raise FieldFileError(f"unexpected record beyond {expected}", line=body[expected][0])

    data = np.empty((expected, 4))
    for r, (line_no, text) in enumerate(body):
        parts = text.split()
        if len(parts) != 4:
            raise FieldFileError(f"record needs 4 columns, got {len(parts)}", line=line_no)
        data[r] = [_parse_number(p, line_no) for p in parts]

    xs = data[::J, 0]
    ys = data[:J, 1]
    for r in range(expected):
        n, j = divmod(r, J)
        if data[r, 0] != xs[n] or data[r, 1] != ys[j]:
            raise FieldFileError("coordinates are not on a regular x-major lattice", line=body[r][0])
    for axis, coords, stride in (("x", xs, J), ("y", ys, 1)):
        bad = np.flatnonzero(np.diff(coords) <= 0)
        if bad.size:
            raise FieldFileError(
                f"{axis} coordinates are not strictly ascending",
                line=body[(bad[0] + 1) * stride][0],
            )

    values = (data[:, 2] + 1j * data[:, 3]).reshape(N, J)
    common = dict(
        frequency=_parse_number(header["frequency"], columns_line),
        sound_speed=_parse_number(header["sound_speed"], columns_line),
    )
    z_plane = _parse_number(header["z_plane"], columns_line)
    try:
        if kind == "planar":
            grid = PlanarGrid(x_coords=xs, y_coords=ys, z_plane=z_plane)
            return PlanarField(grid=grid, values=values, **common)
        y0 = _parse_number(header["y0"], columns_line)
        if not np.all(ys == y0):
            raise FieldFileError("record y differs from header y0", line=body[0][0])
        grid = LineGrid(x_coords=xs, y0=y0, z_plane=z_plane)
        return LineField(grid=grid, values=values[:, 0], **common)
    except ValidationError as exc:
        raise FieldFileError(f"invalid field: {exc.errors()[0]['msg']}", line=columns_line) from exc
