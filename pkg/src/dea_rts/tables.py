"""Dataset CSV files and the built-in six-unit example.

Files have a header row whose first cell is ``dmu``; input columns are
prefixed ``in:`` and output columns ``out:``, in any order.
"""
from __future__ import annotations

import csv
import io
import math

import numpy as np

from .errors import DataError
from .models import Dataset

INPUT_PREFIX = "in:"
OUTPUT_PREFIX = "out:"

TABLE1_CSV = """\
dmu,in:x1,in:x2,out:y
A,4,1,1
B,4,2,2
C,6,1,3
D,9,1.5,3
E,4,2,1
F,9,1.5,1
"""


def parse_csv(text: str) -> Dataset:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in r)]
    if not rows:
        raise DataError("empty file: no header row")
    header = [h.strip() for h in rows[0]]
    if header[0].lower() != "dmu":
        raise DataError(f"row 1, column 1: expected 'dmu', got {header[0]!r}")
    in_cols, out_cols = [], []
    for k, h in enumerate(header[1:], start=1):
        if h.startswith(INPUT_PREFIX) and len(h) > len(INPUT_PREFIX):
            in_cols.append(k)
        elif h.startswith(OUTPUT_PREFIX) and len(h) > len(OUTPUT_PREFIX):
            out_cols.append(k)
        else:
            raise DataError(f"row 1, column {k + 1}: header {h!r} lacks an 'in:' or 'out:' prefix")
    if not in_cols or not out_cols:
        raise DataError("need at least one 'in:' column and one 'out:' column")
    labels = [header[k].split(":", 1)[1] for k in in_cols + out_cols]
    if len(set(labels)) != len(labels):
        raise DataError("duplicate factor names in header")

    body = rows[1:]
    if not body:
        raise DataError("empty dataset")
    names, values = [], []
    for i, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise DataError(f"row {i}: {len(row)} cells, header has {len(header)}")
        name = row[0].strip()
        if not name:
            raise DataError(f"row {i}, column 1: empty DMU name")
        if name in names:
            raise DataError(f"row {i}, column 1: duplicate DMU name {name!r}")
        vals = []
        for k in in_cols + out_cols:
            cell = row[k].strip()
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"row {i}, column {k + 1} ({header[k]}): "
                                f"{cell!r} is not a number") from None
            if not math.isfinite(v):
                raise DataError(f"row {i}, column {k + 1} ({header[k]}): non-finite value")
            if v < 0:
                raise DataError(f"row {i}, column {k + 1} ({header[k]}): negative value {cell}")
            vals.append(v)
        names.append(name)
        values.append(vals)

    data = np.array(values).T
    m = len(in_cols)
    return Dataset(tuple(names), data[:m], data[m:],
                   tuple(labels[:m]), tuple(labels[m:]))


def dataset_to_csv(dataset: Dataset) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dmu"] + [INPUT_PREFIX + l for l in dataset.input_labels]
               + [OUTPUT_PREFIX + l for l in dataset.output_labels])
    for j, name in enumerate(dataset.names):
        w.writerow([name] + [_num(v) for v in dataset.X[:, j]] + [_num(v) for v in dataset.Y[:, j]])
    return buf.getvalue()


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def table1() -> Dataset:
    """The two-input, one-output example with units A to F."""
    return parse_csv(TABLE1_CSV)
