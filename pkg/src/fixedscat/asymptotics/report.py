"""Container for a measured-versus-bound sweep and the small fitting helpers
shared by the estimate checks."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True, eq=False)
class EstimateReport:
    """One row per sweep point; verdicts are recomputable from the stored numbers.

    ``extra`` holds additional per-point columns (same length as ``kappas``)
    and ``scalars`` the named fitted numbers the verdicts were derived from.
    """

    name: str
    kappas: np.ndarray
    etas: np.ndarray
    measured: np.ndarray
    bound_or_fit: np.ndarray
    fitted_exponent: float = float("nan")
    verdicts: dict = field(default_factory=dict)
    scalars: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.kappas)
        for label, arr in (("etas", self.etas), ("measured", self.measured), ("bound_or_fit", self.bound_or_fit)):
            if len(arr) != n:
                raise ValueError(f"{label} has {len(arr)} entries, expected {n}")
        for key, arr in self.extra.items():
            if len(arr) != n:
                raise ValueError(f"extra column {key!r} has wrong length")

    @property
    def passed(self) -> bool:
        return all(bool(v) for v in self.verdicts.values())

    def columns(self) -> list[str]:
        return ["kappa", "eta", "measured", "bound_or_fit", *self.extra]

    def rows(self):
        for i in range(len(self.kappas)):
            yield [self.kappas[i], self.etas[i], self.measured[i], self.bound_or_fit[i]] + [
                self.extra[c][i] for c in self.extra
            ]

    def to_csv(self, path, header_comment: str | None = None) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            if header_comment:
                fh.write(f"# {header_comment}\n")
            w = csv.writer(fh)
            w.writerow(self.columns())
            for row in self.rows():
                w.writerow([repr(float(x)) for x in row])
        return path

    def summary(self) -> str:
        lines = [f"[{self.name}]"]
        if np.isfinite(self.fitted_exponent):
            lines.append(f"fitted_exponent = {self.fitted_exponent:.6g}")
        for key, val in self.scalars.items():
            lines.append(f"{key} = {val:.6g}" if isinstance(val, float) else f"{key} = {val}")
        for key, ok in self.verdicts.items():
            lines.append(f"{key}: {'pass' if ok else 'FAIL'}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "fitted_exponent": _jsonable(self.fitted_exponent),
                "scalars": {k: _jsonable(v) for k, v in self.scalars.items()},
                "verdicts": {k: bool(v) for k, v in self.verdicts.items()},
            },
            indent=2,
        )


def _jsonable(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x) if np.isfinite(x) else str(float(x))
    return x


def loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x`` (``nan`` if any ``y <= 0``)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2 or np.any(y <= 0):
        return float("nan")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def log_eta_rule(kappa, a: float):
    """Matching height with the additive constant set to zero: ``ln(kappa) / a``."""
    return np.log(np.asarray(kappa, dtype=float)) / a
