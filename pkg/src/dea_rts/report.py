"""Rendering of RTS results and efficiency passes as table, JSON or CSV."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .models import Dataset, EfficiencyOutcome, Point, Tolerances, DEFAULT_TOLERANCES, bcc_evaluate, ccr_evaluate
from .rts import RtsResult, bcc_projection

FORMATS = ("table", "json", "csv")

RTS_FIELDS = ("dmu", "group", "theta_bcc", "theta_ccr", "lambda_sum", "rts", "grs",
              "projection", "nearest_mpss", "diagnostics")
EFFICIENCY_FIELDS = ("dmu", "model", "theta", "slack_sum", "lambda_sum", "efficient", "projection")


@dataclass(frozen=True)
class EfficiencyRow:
    dmu: str
    outcome: EfficiencyOutcome
    projection: Point


def efficiency_rows(dataset: Dataset, model: str = "bcc",
                    tol: Tolerances = DEFAULT_TOLERANCES) -> list:
    evaluate = bcc_evaluate if model == "bcc" else ccr_evaluate
    rows = []
    for j, name in enumerate(dataset.names):
        target = dataset.point(j)
        out = evaluate(dataset, target, tol)
        rows.append(EfficiencyRow(name, out, bcc_projection(target, out, tol)))
    return rows


def point_to_json(p: Optional[Point]):
    if p is None:
        return None
    return {"inputs": [float(v) for v in p.inputs], "outputs": [float(v) for v in p.outputs]}


def point_to_text(p: Optional[Point], digits: Optional[int] = None) -> str:
    if p is None:
        return ""
    f = repr if digits is None else (lambda v: f"{v:.{digits}f}")
    return ";".join(f(float(v)) for v in p.inputs) + "|" + ";".join(f(float(v)) for v in p.outputs)


def point_from_text(text: str) -> Optional[Point]:
    if not text:
        return None
    ins, outs = text.split("|")
    return Point([float(v) for v in ins.split(";")], [float(v) for v in outs.split(";")])


def _opt(v):
    return None if v is None else float(v)


def result_to_dict(r: RtsResult) -> dict:
    return {
        "dmu": r.dmu,
        "group": None if r.group is None else str(r.group),
        "theta_bcc": _opt(r.theta_bcc),
        "theta_ccr": _opt(r.theta_ccr),
        "lambda_sum": _opt(r.lambda_sum),
        "rts": None if r.rts is None else str(r.rts),
        "grs": [{name: float(w)} for name, w in r.grs],
        "projection": point_to_json(r.point),
        "nearest_mpss": point_to_json(r.nearest_mpss),
        "diagnostics": list(r.diagnostics),
    }


def efficiency_to_dict(row: EfficiencyRow) -> dict:
    o = row.outcome
    return {
        "dmu": row.dmu,
        "model": o.model,
        "theta": o.theta,
        "slack_sum": o.slack_sum,
        "lambda_sum": o.lambda_sum,
        "efficient": o.is_efficient,
        "projection": point_to_json(row.projection),
    }


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _rts_csv_row(r: RtsResult) -> list:
    return [
        r.dmu,
        "" if r.group is None else str(r.group),
        _csv_cell(_opt(r.theta_bcc)),
        _csv_cell(_opt(r.theta_ccr)),
        _csv_cell(_opt(r.lambda_sum)),
        "" if r.rts is None else str(r.rts),
        ";".join(f"{name}:{float(w)!r}" for name, w in r.grs),
        point_to_text(r.point),
        point_to_text(r.nearest_mpss),
        " | ".join(r.diagnostics),
    ]


def _efficiency_csv_row(row: EfficiencyRow) -> list:
    o = row.outcome
    return [row.dmu, o.model, repr(o.theta), repr(o.slack_sum), repr(o.lambda_sum),
            str(o.is_efficient).lower(), point_to_text(row.projection)]


def _fmt(v, digits=4) -> str:
    return "--" if v is None else f"{v:.{digits}f}"


def _grs_text(grs, digits=4) -> str:
    if not grs:
        return "--"
    return " ".join(f"{name}:{w:.{digits}f}" for name, w in grs)


def _align(header: Sequence[str], body: list) -> str:
    widths = [max(len(str(c)) for c in col) for col in zip(header, *body)]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _rts_table(results: Sequence[RtsResult]) -> str:
    with_mpss = any(r.nearest_mpss is not None for r in results)
    header = ["dmu", "rts", "group", "theta_bcc", "slack_sum", "theta_ccr", "lambda_sum",
              "grs", "projection"]
    if with_mpss:
        header.append("nearest_mpss")
    body = []
    for r in results:
        row = [r.dmu, "?" if r.rts is None else str(r.rts),
               "--" if r.group is None else str(r.group),
               _fmt(r.theta_bcc), _fmt(r.slack_sum), _fmt(r.theta_ccr), _fmt(r.lambda_sum),
               _grs_text(r.grs),
               "--" if r.projection is None or r.projection.value == "self"
               else f"{point_to_text(r.point, 4)} ({r.projection})"]
        if with_mpss:
            row.append(point_to_text(r.nearest_mpss, 4) or "--")
        body.append(row)
    text = _align(header, body)
    notes = [f"{r.dmu}: {d}" for r in results for d in r.diagnostics]
    if notes:
        text += "\n" + "\n".join(notes) + "\n"
    return text


def _efficiency_table(rows: Sequence[EfficiencyRow]) -> str:
    header = ["dmu", "theta", "slack_sum", "lambda_sum", "projection"]
    body = []
    for row in rows:
        o = row.outcome
        proj = "--" if o.is_efficient else point_to_text(row.projection, 4)
        body.append([row.dmu, _fmt(o.theta), _fmt(o.slack_sum), _fmt(o.lambda_sum), proj])
    return _align(header, body)


def render_report(results: Sequence, fmt: str = "table") -> str:
    """Render a list of :class:`RtsResult` or :class:`EfficiencyRow`."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    results = list(results)
    efficiency = bool(results) and isinstance(results[0], EfficiencyRow)
    if fmt == "json":
        to_dict = efficiency_to_dict if efficiency else result_to_dict
        return json.dumps({"results": [to_dict(r) for r in results]}, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(EFFICIENCY_FIELDS if efficiency else RTS_FIELDS)
        to_row = _efficiency_csv_row if efficiency else _rts_csv_row
        for r in results:
            w.writerow(to_row(r))
        return buf.getvalue()
    return _efficiency_table(results) if efficiency else _rts_table(results)


def parse_report_csv(text: str) -> list:
    """Read an RTS CSV report back into dicts shaped like :func:`result_to_dict`."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        grs = []
        if row["grs"]:
            for pair in row["grs"].split(";"):
                name, w = pair.rsplit(":", 1)
                grs.append({name: float(w)})
        out.append({
            "dmu": row["dmu"],
            "group": row["group"] or None,
            "theta_bcc": float(row["theta_bcc"]) if row["theta_bcc"] else None,
            "theta_ccr": float(row["theta_ccr"]) if row["theta_ccr"] else None,
            "lambda_sum": float(row["lambda_sum"]) if row["lambda_sum"] else None,
            "rts": row["rts"] or None,
            "grs": grs,
            "projection": point_to_json(point_from_text(row["projection"])),
            "nearest_mpss": point_to_json(point_from_text(row["nearest_mpss"])),
            "diagnostics": row["diagnostics"].split(" | ") if row["diagnostics"] else [],
        })
    return out


def dataset_table(dataset: Dataset) -> str:
    header = ["dmu", *dataset.input_labels, *dataset.output_labels]
    body = [[name, *(f"{v:g}" for v in dataset.X[:, j]), *(f"{v:g}" for v in dataset.Y[:, j])]
            for j, name in enumerate(dataset.names)]
    return _align(header, body)
