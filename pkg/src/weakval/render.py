"""Text, CSV and JSON rendering of weak-value tables.

Numbers are printed with 12 significant digits; complex values as ``a+bi``
and undefined cells as ``undef``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import re

import numpy as np

from .engine import WeakValueTable

DIGITS = 12
SNAP = 1e-13
UNDEF = "undef"
FORMATS = ("text", "csv", "json")


def fmt_real(x: float) -> str:
    if math.isnan(x):
        return UNDEF
    if abs(x) < SNAP:
        x = 0.0
    s = format(x, f".{DIGITS}g")
    return "0" if s in ("-0", "0") else s


def fmt_complex(z: complex) -> str:
    z = complex(z)
    if math.isnan(z.real) or math.isnan(z.imag):
        return UNDEF
    re_s = fmt_real(z.real)
    im_s = fmt_real(z.imag)
    if im_s.startswith("-"):
        return f"{re_s}-{im_s[1:]}i"
    return f"{re_s}+{im_s}i"


_COMPLEX = re.compile(r"^(?P<re>[-+]?[^-+]+(?:e[-+]\d+)?)(?P<im>[-+][^-+]+(?:e[-+]\d+)?)i$")


def parse_complex(text: str) -> complex | None:
    """Inverse of :func:`fmt_complex`; ``undef`` maps to ``None``."""
    if text == UNDEF:
        return None
    m = _COMPLEX.match(text)
    if not m:
        raise ValueError(f"not a rendered complex number: {text!r}")
    return complex(float(m["re"]), float(m["im"]))


def _pair(z: complex):
    z = complex(z)
    if math.isnan(z.real):
        return None
    return [z.real, z.imag]


def _summary_average(table: WeakValueTable, label: str) -> str:
    avg = table.summary_averages.get(label)
    return "" if avg is None else fmt_complex(avg)


def table_records(table: WeakValueTable):
    """Rows of rendered strings: (label, cells..., average)."""
    header = ["phi", *table.post_labels, "Average"]
    weight = ["Weight", *(fmt_real(w) for w in table.weights), ""]
    body = [[label, *(fmt_complex(c) for c in row), fmt_complex(avg)]
            for label, row, avg in zip(table.row_labels, table.cells, table.row_averages)]
    footer = [[label, *(fmt_complex(c) for c in row), _summary_average(table, label)]
              for label, row in table.summary_rows.items()]
    return weight, header, body, footer


def render_text(table: WeakValueTable, split: bool = False) -> str:
    weight, header, body, footer = table_records(table)
    if split:
        body = _split_rows(table)
    rows = [weight, header, *body, *footer]
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]

    def line(r):
        return "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip()

    rule = "-" * len(line(header))
    out = [line(weight), line(header), rule, *map(line, body)]
    if footer:
        out += [rule, *map(line, footer)]
    if table.formulas:
        out += ["", "Formulas"]
        for (row, post), f in table.formulas.items():
            out.append(f"  {row} @ {post}: {f}")
    return "\n".join(out) + "\n"


def _split_rows(table: WeakValueTable):
    rows = []
    for label, row, avg in zip(table.row_labels, table.cells, table.row_averages):
        for part, get in (("Re", np.real), ("Im", np.imag)):
            rows.append([f"{label} {part}", *(fmt_real(float(get(c))) for c in row),
                         fmt_real(float(get(avg)))])
    return rows


def render_csv(table: WeakValueTable) -> str:
    weight, header, body, footer = table_records(table)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for r in (header, weight, *body, *footer):
        writer.writerow(r)
    return buf.getvalue()


def table_to_json(table: WeakValueTable) -> dict:
    doc = {
        "post_labels": list(table.post_labels),
        "weights": [fmt_real(w) for w in table.weights],
        "weight_values": [float(w) for w in table.weights],
        "rows": [
            {
                "label": label,
                "cells": [fmt_complex(c) for c in row],
                "values": [_pair(c) for c in row],
                "average": fmt_complex(avg),
                "average_value": _pair(avg),
            }
            for label, row, avg in zip(table.row_labels, table.cells, table.row_averages)
        ],
        "summary_rows": [
            {"label": label, "cells": [fmt_complex(c) for c in row], "values": [_pair(c) for c in row],
             "average": _summary_average(table, label) or None,
             "average_value": _pair(table.summary_averages[label]) if label in table.summary_averages else None}
            for label, row in table.summary_rows.items()
        ],
    }
    if table.formulas:
        doc["formulas"] = [{"row": r, "post": p, "formula": f} for (r, p), f in table.formulas.items()]
    return doc


def render_json(table: WeakValueTable) -> str:
    return json.dumps(table_to_json(table), indent=2) + "\n"


def render_table(table: WeakValueTable, fmt: str = "text", split: bool = False) -> str:
    if fmt == "text":
        return render_text(table, split)
    if fmt == "csv":
        return render_csv(table)
    if fmt == "json":
        return render_json(table)
    raise ValueError(f"unknown format {fmt!r}; valid: {', '.join(FORMATS)}")
