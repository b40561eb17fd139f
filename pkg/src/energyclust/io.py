"""CSV/JSON file formats.

Panel CSV: optional leading ``#`` comment lines, then a header row of
component names, then one row per time point. Numbers are written with
``%.17g`` so a write/read round trip reproduces every float exactly.
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile

import numpy as np

from .embedding import DataError, TimeSeriesPanel

FLOAT_FORMAT = "%.17g"


def atomic_write(path, text):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def comment_line(meta):
    return "# " + json.dumps(meta, sort_keys=True, separators=(",", ":")) + "\n"


def format_matrix_csv(header, rows, meta=None):
    buf = io.StringIO()
    if meta is not None:
        buf.write(comment_line(meta))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([FLOAT_FORMAT % v for v in row])
    return buf.getvalue()


def panel_to_csv(panel, meta=None):
    return format_matrix_csv(panel.names, panel.values, meta)


def write_panel_csv(path, panel, meta=None):
    atomic_write(path, panel_to_csv(panel, meta))


def read_panel_csv(path):
    """Read a panel CSV (rows = time, columns = components, header = names)."""
    try:
        with open(path, newline="") as fh:
            lines = [ln for ln in fh if not ln.startswith("#") and ln.strip()]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows = list(csv.reader(lines))
    if len(rows) < 2:
        raise DataError(f"{path}: need a header and at least one data row")
    header = [h.strip() for h in rows[0]]
    data = np.empty((len(rows) - 1, len(header)))
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataError(f"{path}: row {i} has {len(row)} fields, header has {len(header)}")
        for j, cell in enumerate(row):
            try:
                data[i - 2, j] = float(cell)
            except ValueError:
                raise DataError(f"{path}: non-numeric cell {cell!r} at row {i}, column {j + 1}") from None
    return TimeSeriesPanel(data, tuple(header))


def read_matrix_csv(path):
    """Read a square matrix written by :func:`format_matrix_csv`; returns (names, matrix)."""
    panel_like = read_panel_csv(path)
    return list(panel_like.names), panel_like.values


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
