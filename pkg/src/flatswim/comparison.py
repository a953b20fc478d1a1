"""Cross-robot agility comparison and the rotation-vs-relative-speed fit."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources


@dataclass(frozen=True)
class ComparisonRow:
    """One robot of the survey; characteristic size is its largest dimension."""

    label: str
    length_mm: float
    width_mm: float | None = None
    height_mm: float | None = None
    weight_g: float | None = None
    speed_cm_s: float | None = None
    rotation_deg_s: float | None = None
    maneuverable: bool = False
    limited: bool = False
    this_work: bool = False

    @property
    def characteristic_size_mm(self) -> float:
        dims = [self.length_mm, self.width_mm, self.height_mm]
        return max(d for d in dims if d is not None)

    @property
    def relative_speed(self) -> float | None:
        """Speed normalized by characteristic size, in CS/s."""
        if self.speed_cm_s is None:
            return None
        return self.speed_cm_s / (self.characteristic_size_mm / 10.0)

    @property
    def body_lengths_per_s(self) -> float | None:
        if self.speed_cm_s is None:
            return None
        return self.speed_cm_s / (self.length_mm / 10.0)


def load_comparison_table(path: str | None = None) -> list[ComparisonRow]:
    if path is None:
        text = (
            resources.files("flatswim").joinpath("data/comparison_table.json").read_text()
        )
        raw = json.loads(text)
    else:
        with open(path) as fh:
            raw = json.load(fh)
    return [ComparisonRow(**row) for row in raw["rows"]]


def comparison_fit(rows: list[ComparisonRow]) -> float:
    """Origin-constrained least-squares slope of rotation speed on relative speed.

    slope = sum(omega * s) / sum(s^2) over maneuverable rows that report
    both quantities; deg/s per CS/s.
    """
    pairs = [
        (row.relative_speed, row.rotation_deg_s)
        for row in rows
        if row.maneuverable and row.rotation_deg_s is not None and row.relative_speed is not None
    ]
    if len(pairs) < 1:
        raise ValueError("no rows with both relative speed and rotation speed")
    num = sum(s * w for s, w in pairs)
    den = sum(s * s for s, _ in pairs)
    return num / den


def fit_sensitivity(rows: list[ComparisonRow]) -> dict[str, float]:
    """Fit slope with and without this work's own rows."""
    return {
        "all_rows": comparison_fit(rows),
        "without_this_work": comparison_fit([r for r in rows if not r.this_work]),
    }
