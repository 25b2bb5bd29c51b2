"""Config files, CSV tables and flat solution records."""

from __future__ import annotations

import csv
import dataclasses
import io
from pathlib import Path

from .errors import ParseError
from .model_core import PARAM_NAMES
from .sweep import CSV_HEADER, SweepRow


def parse_config(path) -> dict:
    """Read a flat ``key = value`` file of model parameters.

    Blank lines and ``#`` comments are ignored.  Unknown or repeated keys
    and non-numeric values raise ParseError with the line number.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in PARAM_NAMES:
            raise ParseError(f"{path}:{lineno}: unknown key {key!r}")
        if key in out:
            raise ParseError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: {key} is not a number: {value!r}") from None
    return out


def fmt(x, full: bool = False) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return repr(x) if full else f"{x:.6f}"
    return str(x)


def rows_to_csv(rows: list[SweepRow], full: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([fmt(r.grid_value, full)]
                   + [fmt(getattr(r, k), full) for k in CSV_HEADER[1:-1]]
                   + [";".join(r.flags)])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[SweepRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_HEADER:
        raise ParseError(f"unexpected CSV header {header}")
    rows = []
    for rec in reader:
        vals = [float(v) if v != "" else None for v in rec[:-1]]
        rows.append(SweepRow(*vals, flags=[f for f in rec[-1].split(";") if f]))
    return rows


def solution_record(solution, verbose: bool = False) -> dict:
    """Flat name -> value mapping of a solution; diagnostics only when verbose."""
    rec = {"asset": solution.asset}
    for f in dataclasses.fields(solution):
        value = getattr(solution, f.name)
        if f.name == "diagnostics":
            if verbose:
                for g in dataclasses.fields(value):
                    rec[f"diagnostics.{g.name}"] = getattr(value, g.name)
            continue
        if f.name == "warnings":
            rec[f.name] = ",".join(value)
            continue
        rec[f.name] = value
    return rec


def format_record(rec: dict, full: bool = False) -> str:
    width = max(len(k) for k in rec)
    lines = []
    for k, v in rec.items():
        if isinstance(v, tuple):
            v = "(" + ", ".join(fmt(x, full) for x in v) + ")"
        lines.append(f"{k:<{width}} = {fmt(v, full)}")
    return "\n".join(lines)
