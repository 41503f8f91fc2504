"""Verification report structure shared by the CLI and the acceptance suite.

JSON serialization is canonical: fixed key order, floats rendered with
%.15g, so that parsing an emitted report and re-serializing it is
byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Union

Number = Union[int, float]


def _fmt_float(x: float) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        if x == 0.0:
            return "0"  # canonicalize -0.0: "-0" would re-parse as int 0
        return "%.15g" % x
    return repr(x)


@dataclass
class Row:
    """One checked (or informational) value in a report."""

    label: str
    value: complex
    oracle: Optional[complex] = None
    tol: Optional[float] = None
    checked: bool = False

    @property
    def disc(self) -> Optional[float]:
        """Relative discrepancy against the oracle (absolute if oracle ~ 0)."""
        if self.oracle is None:
            return None
        scale = max(abs(self.oracle), 1.0e-300)
        d = abs(complex(self.value) - complex(self.oracle))
        return d / scale if abs(self.oracle) > 1e-12 else d

    @property
    def passed(self) -> bool:
        if not self.checked:
            return True
        d = self.disc
        return d is not None and self.tol is not None and d <= self.tol


def check_row(label: str, value, oracle, tol: float) -> Row:
    return Row(label, complex(value), complex(oracle), float(tol), True)


def info_row(label: str, value) -> Row:
    return Row(label, complex(value))


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    values: List[Row] = field(default_factory=list)
    runtime_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.values)

    def add(self, row: Row) -> Row:
        self.values.append(row)
        return row

    # -- serialization ------------------------------------------------------

    def to_jsonable(self) -> dict:
        rows = []
        for r in self.values:
            item = {
                "label": r.label,
                "re": float(complex(r.value).real),
                "im": float(complex(r.value).imag),
            }
            if r.oracle is not None:
                item["oracle_re"] = float(complex(r.oracle).real)
                item["oracle_im"] = float(complex(r.oracle).imag)
                item["disc"] = float(r.disc)
            if r.tol is not None:
                item["tol"] = float(r.tol)
            item["checked"] = r.checked
            item["pass"] = r.passed
            rows.append(item)
        return {
            "command": self.command,
            "inputs": self.inputs,
            "values": rows,
            "runtime_ms": float(self.runtime_ms),
            "pass": self.passed,
        }


def dumps_canonical(obj) -> str:
    """JSON text with %.15g floats and stable key order (insertion order)."""

    def render(x) -> str:
        if isinstance(x, dict):
            items = ", ".join(f"{json.dumps(k)}: {render(v)}" for k, v in x.items())
            return "{" + items + "}"
        if isinstance(x, (list, tuple)):
            return "[" + ", ".join(render(v) for v in x) + "]"
        if isinstance(x, bool):
            return "true" if x else "false"
        if isinstance(x, float):
            return _fmt_float(x)
        if isinstance(x, (int, str)) or x is None:
            return json.dumps(x)
        raise TypeError(f"cannot serialize {type(x)}")

    return render(obj)


def report_json(report: Report) -> str:
    return dumps_canonical(report.to_jsonable()) + "\n"


def report_csv(report: Report) -> str:
    """Plot-ready CSV: label, re, im, oracle_re, oracle_im, disc."""
    lines = ["label,re,im,oracle_re,oracle_im,disc"]
    for r in report.values:
        v = complex(r.value)
        cells = [r.label, _fmt_float(float(v.real)), _fmt_float(float(v.imag))]
        if r.oracle is not None:
            o = complex(r.oracle)
            cells += [
                _fmt_float(float(o.real)),
                _fmt_float(float(o.imag)),
                _fmt_float(float(r.disc)),
            ]
        else:
            cells += ["", "", ""]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
