# qsg/harness/reporting.py
"""Serialisation of reports: sorted-key JSON for machines, a fixed-width table for people."""
import json
import math
from typing import Any, Literal

from qsg.harness.models import Report, VerificationRecord

ReportFormat = Literal["json", "table"]

_COLUMNS = (
    ("claim", 18), ("t", 7), ("s", 7), ("r", 7), ("lambda", 22), ("n", 4),
    ("residual", 11), ("bound", 11), ("verdict", 12),
)


def _number(value) -> str:
    return "-" if value is None else f"{value:.4g}"


def _lam(record: VerificationRecord) -> str:
    params = record.params
    if params.lam_real is None:
        return "-"
    return f"{params.lam_real:+.4g}{params.lam_imag:+.4g}j"


def _row(record: VerificationRecord) -> str:
    params = record.params
    cells = (
        record.claim_id, _number(params.t), _number(params.s), _number(params.r), _lam(record),
        "-" if params.n is None else str(params.n),
        f"{record.residual:.3e}", "-" if record.bound is None else f"{record.bound:.3e}", record.verdict,
    )
    line = " ".join(f"{cell:<{width}}" for cell, (_, width) in zip(cells, _COLUMNS))
    notes = [record.note] if record.note else []
    if params.generator_t is not None:
        notes.insert(0, f"generator at t={params.generator_t:.4g}")
    return f"{line} {'; '.join(notes)}".rstrip()


def render_table(report: Report, include_timing: bool = False) -> str:
    header = " ".join(f"{name:<{width}}" for name, width in _COLUMNS) + " note"
    lines = [
        f"scenario {report.scenario_id}  backend {report.records[0].params.backend if report.records else '-'}"
        f"  tool {report.tool_version}",
        header.rstrip(),
        "-" * len(header),
    ]
    lines.extend(_row(record) for record in report.records)
    summary = report.summary
    lines.append(f"PASS {summary.passed}  FAIL {summary.failed}  REPORT-ONLY {summary.report_only}")
    if include_timing and report.wall_time_ms is not None:
        lines.append(f"wall time {report.wall_time_ms:.1f} ms")
    return "\n".join(lines) + "\n"


def _finite(value: Any) -> Any:
    """Non-finite floats become the strings "inf", "-inf" and "nan", the way powers are tagged."""
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {key: _finite(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(item) for item in value]
    return value


def render_json(report: Report, include_timing: bool = False) -> str:
    """Strict JSON with sorted keys; Python's float repr is the shortest round-trip decimal."""
    payload = report.model_dump(mode="python", exclude=None if include_timing else {"wall_time_ms"})
    return json.dumps(_finite(payload), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def emit_report(report: Report, format: ReportFormat = "json", include_timing: bool = False) -> bytes:
    """
    :param report: The report to serialise.
    :param format: 'json' or 'table'.
    :param include_timing: Emit wall_time_ms, which makes otherwise identical runs differ.
    :return: UTF-8 bytes.
    """
    if format == "json":
        text = render_json(report, include_timing)
    elif format == "table":
        text = render_table(report, include_timing)
    else:
        raise ValueError(f"unknown report format '{format}'")
    return text.encode("utf-8")
