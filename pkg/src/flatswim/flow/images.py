"""8-bit grayscale image and displacement-grid file IO."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
from PIL import Image

from flatswim.flow.piv import PivResult


def write_pgm(path: str | Path, img: np.ndarray) -> None:
    """Write a uint8 array as binary PGM (P5)."""
    img = np.ascontiguousarray(img, dtype=np.uint8)
    if img.ndim != 2:
        raise ValueError("PGM output requires a 2-D grayscale array")
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def read_pgm(path: str | Path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    # Header: magic, width, height, maxval separated by whitespace/comments.
    fields: list[bytes] = []
    i = 0
    while len(fields) < 4:
        while i < len(data) and data[i : i + 1].isspace():
            i += 1
        if data[i : i + 1] == b"#":
            while i < len(data) and data[i : i + 1] != b"\n":
                i += 1
            continue
        j = i
        while j < len(data) and not data[j : j + 1].isspace():
            j += 1
        fields.append(data[i:j])
        i = j
    if fields[0] != b"P5":
        raise ValueError("not a binary PGM (P5) file")
    w, h, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    if maxval != 255:
        raise ValueError("only 8-bit PGM supported")
    i += 1  # single whitespace after maxval
    pixels = np.frombuffer(data[i : i + w * h], dtype=np.uint8)
    return pixels.reshape(h, w).copy()


def write_png(path: str | Path, img: np.ndarray) -> None:
    Image.fromarray(np.ascontiguousarray(img, dtype=np.uint8), mode="L").save(path)


def read_png(path: str | Path) -> np.ndarray:
    return np.asarray(Image.open(path).convert("L"), dtype=np.uint8)


def load_image(path: str | Path) -> np.ndarray:
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        return read_pgm(path)
    return read_png(path)


def save_image(path: str | Path, img: np.ndarray) -> None:
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        write_pgm(path, img)
    else:
        write_png(path, img)


def write_displacement_csv(path: str | Path, result: PivResult) -> None:
    """Displacement grid as CSV rows (i, j, x_mm, y_mm, u, v, valid)."""
    scale = result.scale_mm_per_px
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "j", "x_mm", "y_mm", "u", "v", "valid"])
        for j in range(result.u.shape[0]):
            for i in range(result.u.shape[1]):
                u = result.u[j, i]
                v = result.v[j, i]
                writer.writerow(
                    [
                        i,
                        j,
                        repr(result.x[i] * scale),
                        repr(result.y[j] * scale),
                        "" if np.isnan(u) else repr(float(u)),
                        "" if np.isnan(v) else repr(float(v)),
                        int(result.valid[j, i]),
                    ]
                )
