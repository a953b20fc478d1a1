#!/usr/bin/env python3
"""Sample traveling-wave fin profiles over one actuation period.

Emits an animation-ready CSV of (frame, x, z) rows plus a waterfall plot,
and prints the wave metrics across the drive band.
"""

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from flatswim.fin_wave import FinWaveSpec, amplitude_at, fin_profile, wave_count, wavelength_at

OUT = Path(__file__).resolve().parent.parent / "out"
OUT.mkdir(exist_ok=True)

F_ACT = 40.0
FRAMES = 24
SAMPLES = 120


def main():
    spec = FinWaveSpec()
    rows = []
    fig, ax = plt.subplots(figsize=(7, 4))
    for frame in range(FRAMES):
        t = frame / (FRAMES * F_ACT)
        profile = fin_profile(spec, F_ACT, t, samples=SAMPLES)
        rows += [(frame, x, z) for x, z in profile]
        xs = [x * 1000 for x, _ in profile]
        zs = [z * 1000 + frame * 0.8 for _, z in profile]
        ax.plot(xs, zs, lw=0.8, color="tab:blue")
    ax.set_xlabel("position along fin (mm)")
    ax.set_ylabel("deflection (mm, frames offset)")
    fig.tight_layout()
    fig.savefig(OUT / "fin_wave_frames.png", dpi=150)

    with open(OUT / "fin_wave_frames.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["frame", "x_m", "z_m"])
        w.writerows(rows)
    print(f"wrote {OUT/'fin_wave_frames.png'} and {OUT/'fin_wave_frames.csv'}")

    print("\nwave metrics:")
    print(f"{'f_act':>8} {'wavelength':>11} {'waves on fin':>13} {'peak-to-peak':>13}")
    for f in (16.0, 25.0, 40.0, 60.0):
        print(
            f"{f:>6.0f} Hz {wavelength_at(spec, f)*1000:>8.1f} mm "
            f"{wave_count(spec, f):>10.2f} {amplitude_at(spec, f)*1000:>10.1f} mm"
        )


if __name__ == "__main__":
    main()
