"""Structured experiment reports and their JSON/CSV serialisation."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .stats import TestOutcome

VOLATILE_FIELDS = ("duration_ms",)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if x != x or x in (float("inf"), float("-inf")):
            return repr(x)
        return x
    return x


@dataclass
class VerificationReport:
    experiment: str
    network: dict
    params: dict
    seed: int | None
    workers: int = 1
    checks: list[TestOutcome] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    duration_ms: float = 0.0
    invocation: list[str] | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.gating)

    def add(self, outcome: TestOutcome) -> TestOutcome:
        self.checks.append(outcome)
        return outcome

    def failures(self) -> list[TestOutcome]:
        return [c for c in self.checks if c.gating and not c.passed]

    def to_dict(self) -> dict:
        d = {
            "experiment": self.experiment,
            "params": self.params,
            "network": self.network,
            "seed": self.seed,
            "workers": self.workers,
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "diagnostics": self.diagnostics,
            "duration_ms": self.duration_ms,
        }
        if self.invocation is not None:
            d["invocation"] = self.invocation
        return _jsonable(d)

    def to_json(self, *, volatile: bool = True) -> str:
        d = self.to_dict()
        if not volatile:
            for k in VOLATILE_FIELDS:
                d.pop(k, None)
        return json.dumps(d, indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["experiment", "check", "statistic", "threshold", "passed", "vacuous", "gating", "n1", "n2", "alpha"])
        for c in self.checks:
            w.writerow([self.experiment, c.name, repr(float(c.statistic)), repr(float(c.threshold)), c.passed,
                        c.vacuous, c.gating, c.n1, c.n2, "" if c.alpha is None else c.alpha])
        return buf.getvalue()

    def summary_lines(self) -> list[str]:
        lines = [f"{self.experiment}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            if c.vacuous:
                tag += " (vacuous)"
            if not c.gating:
                tag += " (diagnostic)"
            lines.append(f"  {tag:<22} {c.name}: {c.statistic:.6g} vs {c.threshold:.6g}")
        return lines


def write_atomic(path: str | Path, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent if str(path.parent) else ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
