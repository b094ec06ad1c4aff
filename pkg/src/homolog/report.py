"""Report emission for catalog runs.

Results are ordered by instance, then check, then evidence index, so the
same corpus and depth give the same bytes once timings are switched off.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from typing import IO, Sequence

from .checks import CheckResult

REPORT_VERSION = "1"
FORMATS = ("json", "csv", "text")
STATUSES = ("pass", "fail", "inconclusive")


def ordered(results: Sequence[CheckResult]) -> list[CheckResult]:
    return sorted(results, key=lambda r: (r.instance, r.check))


def status_counts(results: Sequence[CheckResult]) -> dict[str, int]:
    c = Counter(r.status for r in results)
    return {s: c.get(s, 0) for s in STATUSES}


def exit_code(results: Sequence[CheckResult]) -> int:
    """1 if anything failed, else 2 if anything was inconclusive, else 0."""
    counts = status_counts(results)
    if counts["fail"]:
        return 1
    if counts["inconclusive"]:
        return 2
    return 0


def _ms(r: CheckResult, timing: bool) -> float:
    return round(r.ms, 1) if timing else 0


def result_dict(r: CheckResult, timing: bool = True) -> dict:
    out = {
        "check": r.check,
        "instance": r.instance,
        "depth": r.depth,
        "status": r.status,
        "evidence": [row.as_dict() for row in r.evidence],
        "ms": _ms(r, timing),
        "diagnostics": list(r.diagnostics),
    }
    bad = r.first_violation
    if bad is not None:
        out["first_violation"] = bad.as_dict()
    return out


def report_dict(results: Sequence[CheckResult], corpus: str, depth: int, timing: bool = True) -> dict:
    rs = ordered(results)
    return {
        "version": REPORT_VERSION,
        "corpus": corpus,
        "depth": depth,
        "counts": status_counts(rs),
        "results": [result_dict(r, timing) for r in rs],
    }


def _json(results, corpus, depth, timing) -> str:
    return json.dumps(report_dict(results, corpus, depth, timing), indent=2, sort_keys=False) + "\n"


_CSV_FIELDS = ["instance", "check", "status", "n", "subject", "lhs", "relation", "rhs", "holds", "ms", "diagnostics"]


def _csv(results, corpus, depth, timing) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in ordered(results):
        base = {
            "instance": r.instance,
            "check": r.check,
            "status": r.status,
            "ms": _ms(r, timing),
            "diagnostics": "; ".join(r.diagnostics),
        }
        if not r.evidence:
            w.writerow(base)
        for row in r.evidence:
            d = row.as_dict()
            w.writerow({**base, **{k: d[k] for k in ("n", "subject", "lhs", "relation", "rhs", "holds")}})
    return buf.getvalue()


def _row_text(d: dict) -> str:
    at = f"n={d['n']} " if d["n"] is not None else ""
    return f"{at}{d['subject']}: {d['lhs']} {d['relation']} {d['rhs']}"


def _text(results, corpus, depth, timing) -> str:
    lines = [f"corpus {corpus}, depth {depth}"]
    for r in ordered(results):
        t = f"  {r.ms:8.0f} ms" if timing else ""
        lines.append(f"{r.status.upper():12} {r.instance:16} {r.check:14} rows={len(r.evidence)}{t}")
        bad = r.first_violation
        if bad is not None:
            lines.append(f"    first violation {_row_text(bad.as_dict())}")
        for diag in r.diagnostics:
            lines.append(f"    {diag}")
    counts = status_counts(results)
    lines.append(" ".join(f"{k}={v}" for k, v in counts.items()))
    return "\n".join(lines) + "\n"


_WRITERS = {"json": _json, "csv": _csv, "text": _text}


def render(results: Sequence[CheckResult], fmt: str = "json", *, corpus: str = "", depth: int = 0, timing: bool = True) -> str:
    if fmt not in _WRITERS:
        raise ValueError(f"unknown report format {fmt!r}; expected one of {', '.join(FORMATS)}")
    return _WRITERS[fmt](results, corpus, depth, timing)


def emit_report(
    results: Sequence[CheckResult],
    fmt: str = "json",
    out: str | IO[str] | None = None,
    *,
    corpus: str = "",
    depth: int = 0,
    timing: bool = True,
) -> int:
    """Write the report to a path or stream and return the run's exit code."""
    text = render(results, fmt, corpus=corpus, depth=depth, timing=timing)
    if isinstance(out, str):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    elif out is not None:
        out.write(text)
    return exit_code(results)


__all__ = ["FORMATS", "REPORT_VERSION", "emit_report", "exit_code", "render", "report_dict", "status_counts"]
