"""Regular-grid 2-D velocity field."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class FlowField:
    """Velocity vectors on a regular grid.

    u and v are (ny, nx) arrays of the x- and y-components; the sample at
    [j, i] sits at origin + (i, j) * spacing.
    """

    u: np.ndarray
    v: np.ndarray
    spacing: float = 1.0
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        if u.ndim != 2 or u.shape != v.shape:
            raise ValueError("u and v must be 2-D arrays of equal shape")
        if self.spacing <= 0.0:
            raise ValueError("grid spacing must be positive")
        if not (np.isfinite(u).all() and np.isfinite(v).all()):
            raise ValueError("velocity components must be finite")

    @property
    def shape(self) -> tuple[int, int]:
        return self.u.shape

    @property
    def xs(self) -> np.ndarray:
        return self.origin[0] + self.spacing * np.arange(self.u.shape[1])

    @property
    def ys(self) -> np.ndarray:
        return self.origin[1] + self.spacing * np.arange(self.u.shape[0])

    def magnitude(self) -> np.ndarray:
        return np.hypot(self.u, self.v)

    def sample(self, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Bilinear velocity at world coordinates, clamped to the grid edges."""
        gx = np.clip((np.asarray(x) - self.origin[0]) / self.spacing, 0, self.u.shape[1] - 1)
        gy = np.clip((np.asarray(y) - self.origin[1]) / self.spacing, 0, self.u.shape[0] - 1)
        return _bilinear(self.u, gx, gy), _bilinear(self.v, gx, gy)

    def translated(self, dx: float, dy: float) -> "FlowField":
        return FlowField(self.u, self.v, self.spacing, (self.origin[0] + dx, self.origin[1] + dy))


def _bilinear(a: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    i0 = np.floor(gx).astype(np.intp)
    j0 = np.floor(gy).astype(np.intp)
    i0 = np.minimum(i0, a.shape[1] - 2) if a.shape[1] > 1 else np.zeros_like(i0)
    j0 = np.minimum(j0, a.shape[0] - 2) if a.shape[0] > 1 else np.zeros_like(j0)
    fx = gx - i0
    fy = gy - j0
    i1 = np.minimum(i0 + 1, a.shape[1] - 1)
    j1 = np.minimum(j0 + 1, a.shape[0] - 1)
    return (
        a[j0, i0] * (1 - fy) * (1 - fx)
        + a[j0, i1] * (1 - fy) * fx
        + a[j1, i0] * fy * (1 - fx)
        + a[j1, i1] * fy * fx
    )


def save_field_json(path: str | Path, fld: FlowField) -> None:
    payload = {
        "spacing": fld.spacing,
        "origin": list(fld.origin),
        "u": fld.u.tolist(),
        "v": fld.v.tolist(),
    }
    Path(path).write_text(json.dumps(payload))


def load_field_json(path: str | Path) -> FlowField:
    raw = json.loads(Path(path).read_text())
    return FlowField(
        u=np.asarray(raw["u"], dtype=float),
        v=np.asarray(raw["v"], dtype=float),
        spacing=float(raw["spacing"]),
        origin=tuple(raw["origin"]),
    )
