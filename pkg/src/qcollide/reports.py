"""Delimited text output for traces, sweeps and distribution grids.

All writers emit comma-separated files with a header row, '.' decimal
marker, LF line endings, and shortest round-trip float formatting, so a
rerun with identical inputs reproduces the file byte for byte.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .errors import ValidationError

__all__ = [
    "write_rows",
    "write_queue_trace_csv",
    "write_trajectory_csv",
    "write_sweep_csv",
    "write_cdf_csv",
    "write_cdf_comparison_csv",
    "write_state_csv",
    "read_csv",
]


def _cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_rows(path, header, rows):
    """Write one delimited file; rows hold numbers, cells format losslessly."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    Path(path).write_text(buffer.getvalue())


def write_queue_trace_csv(path, trace):
    rows = zip(
        range(1, trace.n + 1),
        trace.interarrival,
        trace.service,
        trace.waiting,
        trace.idle,
        trace.arrival_time,
        trace.departure_time,
    )
    write_rows(path, ["n", "T", "S", "Wq", "I", "t_arrive", "t_depart"], rows)


def write_trajectory_csv(path, record):
    states = record.states
    rows = zip(
        range(1, record.n + 1),
        record.departure_times,
        record.coherences,
        states[:, 0, 0].real,
        states[:, 0, 1].real,
        states[:, 0, 1].imag,
        states[:, 1, 1].real,
    )
    write_rows(
        path,
        ["n", "t_depart", "C", "rho_re_00", "rho_re_01", "rho_im_01", "rho_re_11"],
        rows,
    )


def write_sweep_csv(path, axis, rows):
    """rows: (parameter value, coherence mean, coherence variance, stderr).

    The stderr column is the naive sqrt(Var/N) over all retained samples;
    it ignores autocorrelation along each trajectory and so understates
    the true uncertainty.
    """
    write_rows(path, [axis, "E_C", "Var_C", "stderr"], rows)


def write_cdf_csv(path, grid):
    write_rows(path, ["x", "F"], zip(grid.x, grid.values))


def write_cdf_comparison_csv(path, x, numeric, empirical):
    numeric = np.asarray(numeric, dtype=float)
    empirical = np.asarray(empirical, dtype=float)
    rows = zip(x, numeric, empirical, np.abs(numeric - empirical))
    write_rows(path, ["x", "F_numeric", "F_empirical", "abs_diff"], rows)


def write_state_csv(path, rho):
    rho = np.asarray(rho)
    rows = []
    for part, block in (("re", rho.real), ("im", rho.imag)):
        for i in range(rho.shape[0]):
            for j in range(rho.shape[1]):
                rows.append((part, i, j, _cell(block[i, j])))
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["part", "i", "j", "value"])
    writer.writerows(rows)
    Path(path).write_text(buffer.getvalue())


def read_csv(path):
    """Read a numeric delimited file back as (header, column arrays)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError(f"{path} is empty") from None
    if not header or any(not name.strip() for name in header):
        raise ValidationError(f"{path} has a malformed header row")
    columns = [[] for _ in header]
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ValidationError(f"{path}:{lineno} has {len(row)} cells, expected {len(header)}")
        for cell, column in zip(row, columns):
            try:
                column.append(float(cell))
            except ValueError:
                raise ValidationError(f"{path}:{lineno} holds a non-numeric cell: {cell!r}") from None
    if not columns[0]:
        raise ValidationError(f"{path} has a header but no data rows")
    return header, {name: np.array(column) for name, column in zip(header, columns)}
