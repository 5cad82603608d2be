"""Check results, CSV tables and the plain-text verification report."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import PreconditionError
from .fieldio import write_field

PASS, WARN, FAIL = "pass", "warn", "fail"

# one anchor per check identifier
ANCHORS = {
    "decay_slopes": "L^p-L^q decay of the fractional heat kernel",
    "norm_axioms": "modular and Luxemburg norm definition",
    "holder": "Hoelder inequality for variable exponents",
    "duality": "norm-conjugate formula (1/2 to 2 sandwich)",
    "embedding": "embedding on bounded sets and the embedding class",
    "maximal": "maximal function and Riesz transforms under log-Hoelder",
    "riesz_potential": "Riesz potential bound",
    "picard": "contraction principle and local well-posedness (2 eta ball)",
    "estimates": "linear and bilinear a priori estimates and the smallness condition",
    "regularity": "propagation of derivatives",
    "scaling": "critical scaling of the data space",
}


@dataclass
class Table:
    """A CSV table: header, rows and trailing metadata rows."""

    header: list
    rows: list = field(default_factory=list)
    meta: list = field(default_factory=list)


@dataclass
class CheckResult:
    check: str
    label: str
    status: str
    lines: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    fields: dict = field(default_factory=dict)

    @property
    def anchor(self) -> str:
        return ANCHORS[self.check]


def fmt(x) -> str:
    """Shortest round-trip text for floats; plain ``str`` otherwise."""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def table_text(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([fmt(v) for v in row])
    for row in table.meta:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def overall_status(results, strict: bool = False) -> str:
    statuses = {r.status for r in results}
    if FAIL in statuses or (strict and WARN in statuses):
        return FAIL
    return WARN if WARN in statuses else PASS


def traceability_lines(results) -> list:
    width = max(len(r.label) for r in results)
    awidth = max(len(r.anchor) for r in results)
    lines = [f"{'check':<{width}}  {'anchor':<{awidth}}  status", "-" * (width + awidth + 10)]
    for r in results:
        lines.append(f"{r.label:<{width}}  {r.anchor:<{awidth}}  {r.status}")
    return lines


def report_text(results, header=(), strict: bool = False) -> str:
    out = list(header)
    if out:
        out.append("")
    for r in results:
        out.append(f"[{r.status.upper()}] {r.label}: {r.anchor}")
        out += [f"    {line}" for line in r.lines]
        out.append("")
    out.append("traceability")
    out += traceability_lines(results)
    out.append("")
    out.append(f"overall: {overall_status(results, strict)}" + (" (strict)" if strict else ""))
    return "\n".join(out) + "\n"


def _write(path: Path, text: str):
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def emit_report(results, out_dir, header=(), strict: bool = False) -> list:
    """Write tables as CSV, field snapshots as SQGF and ``report.txt``; returns the paths."""
    results = list(results)
    if not results:
        raise PreconditionError("no check results to report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for r in results:
        for name, table in sorted(r.tables.items()):
            path = out / f"{name}.csv"
            _write(path, table_text(table))
            written.append(path)
        for name, f in sorted(r.fields.items()):
            path = out / f"{name}.sqgf"
            write_field(f, path)
            written.append(path)
    path = out / "report.txt"
    _write(path, report_text(results, header, strict))
    written.append(path)
    return written
