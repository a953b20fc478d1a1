"""Line integral convolution rendering of a flow field.

A seeded pink-noise texture is smeared along streamlines of the field:
each output pixel is the box-kernel average of texture samples gathered by
bidirectional fixed-step streamline integration. Two passes sharpen the
streaks; the texture is renormalized between passes.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from flatswim.flow.field import FlowField, _bilinear

NOISE_STD = 0.15
NOISE_MEAN = 0.5
DEFAULT_KERNEL_LENGTH = 15.0
STREAMLINE_STEP = 0.5
PASSES = 2


def pink_noise(shape: tuple[int, int], seed: int) -> np.ndarray:
    """Seeded 1/f noise with mean 0.5 and standard deviation 0.15, in [0, 1]."""
    rng = np.random.Generator(np.random.PCG64(seed))
    white = rng.standard_normal(shape)
    spectrum = np.fft.rfft2(white)
    fy = np.fft.fftfreq(shape[0])[:, None]
    fx = np.fft.rfftfreq(shape[1])[None, :]
    k = np.hypot(fy, fx)
    k[0, 0] = np.inf  # zero out the DC term
    spectrum /= np.sqrt(k)
    noise = np.fft.irfft2(spectrum, s=shape)
    return normalize_texture(noise)


def normalize_texture(tex: np.ndarray) -> np.ndarray:
    """Rescale to mean 0.5 and std 0.15, clipped to [0, 1]."""
    std = tex.std()
    if std == 0.0:
        return np.full_like(tex, NOISE_MEAN)
    return np.clip((tex - tex.mean()) / std * NOISE_STD + NOISE_MEAN, 0.0, 1.0)


def _unit_direction(
    u: np.ndarray, v: np.ndarray, gx: np.ndarray, gy: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    ux = _bilinear(u, gx, gy)
    uy = _bilinear(v, gx, gy)
    mag = np.hypot(ux, uy)
    safe = np.where(mag > 0.0, mag, 1.0)
    return ux / safe, uy / safe


def _lic_pass_rows(
    tex: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
    rows: slice,
    kernel_length: float,
    step: float,
) -> np.ndarray:
    ny, nx = tex.shape
    gx, gy = np.meshgrid(
        np.arange(nx, dtype=float), np.arange(rows.start, rows.stop, dtype=float)
    )
    total = _bilinear(tex, gx, gy)
    count = np.ones_like(total)
    n_steps = max(1, int(round(kernel_length / step)))
    for direction in (1.0, -1.0):
        px = gx.copy()
        py = gy.copy()
        mag0 = np.hypot(_bilinear(u, px, py), _bilinear(v, px, py))
        alive = mag0 > 0.0
        if not alive.any():
            continue
        for _ in range(n_steps):
            dx0, dy0 = _unit_direction(u, v, px, py)
            mx = px + direction * 0.5 * step * dx0
            my = py + direction * 0.5 * step * dy0
            mx = np.clip(mx, 0.0, nx - 1.0)
            my = np.clip(my, 0.0, ny - 1.0)
            dx1, dy1 = _unit_direction(u, v, mx, my)
            nxp = px + direction * step * dx1
            nyp = py + direction * step * dy1
            inside = (nxp >= 0.0) & (nxp <= nx - 1.0) & (nyp >= 0.0) & (nyp <= ny - 1.0)
            moving = (dx1 != 0.0) | (dy1 != 0.0)
            alive = alive & inside & moving
            px = np.where(alive, nxp, px)
            py = np.where(alive, nyp, py)
            sample = _bilinear(tex, px, py)
            total += np.where(alive, sample, 0.0)
            count += alive
    return total / count


def _lic_pass(
    tex: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
    kernel_length: float,
    step: float,
    workers: int,
) -> np.ndarray:
    ny = tex.shape[0]
    if workers <= 1 or ny < 4 * workers:
        return _lic_pass_rows(tex, u, v, slice(0, ny), kernel_length, step)
    bounds = np.linspace(0, ny, workers + 1).astype(int)
    chunks = [slice(a, b) for a, b in zip(bounds, bounds[1:]) if b > a]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(
            pool.map(
                lambda rows: _lic_pass_rows(tex, u, v, rows, kernel_length, step), chunks
            )
        )
    return np.vstack(parts)


def lic_render(
    fld: FlowField,
    seed: int,
    kernel_length: float = DEFAULT_KERNEL_LENGTH,
    passes: int = PASSES,
    step: float = STREAMLINE_STEP,
    workers: int = 1,
) -> np.ndarray:
    """Render the field to a uint8 grayscale image, one pixel per grid cell.

    Deterministic for a given seed; a zero-magnitude cell has a degenerate
    streamline and keeps its own (normalized) noise value.
    """
    if kernel_length < 3.0:
        raise ValueError("kernel length must be at least 3 px")
    tex = pink_noise(fld.shape, seed)
    for _ in range(passes):
        tex = _lic_pass(tex, fld.u, fld.v, kernel_length, step, workers)
        tex = normalize_texture(tex)
    lo, hi = tex.min(), tex.max()
    if hi == lo:
        return np.zeros(tex.shape, dtype=np.uint8)
    return np.round((tex - lo) / (hi - lo) * 255.0).astype(np.uint8)
