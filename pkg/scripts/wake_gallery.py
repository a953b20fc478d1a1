#!/usr/bin/env python3
"""Render the forward and turning surface wakes as LIC images.

Saves PGM/PNG renders plus the wake metrics for a range of robot speeds.
"""

from pathlib import Path

from flatswim.flow.images import save_image
from flatswim.flow.lic import lic_render
from flatswim.flow.wake import WakeParams, synthesize_wake, wake_metrics

OUT = Path(__file__).resolve().parent.parent / "out"
OUT.mkdir(exist_ok=True)

SEED = 2024


def main():
    for mode, params in (
        ("forward", WakeParams()),
        ("turning", WakeParams(asymmetry=0.35)),
    ):
        fld = synthesize_wake(0.075, mode, params)
        img = lic_render(fld, seed=SEED, workers=4)
        save_image(OUT / f"wake_{mode}.pgm", img)
        save_image(OUT / f"wake_{mode}.png", img)
        print(f"wake_{mode}: rendered {img.shape[1]}x{img.shape[0]}")

    print("\nspeed sweep (forward wake):")
    print(f"{'robot speed':>12} {'u_prop':>10} {'wake width':>11}")
    for speed in (0.02, 0.04, 0.075, 0.12):
        m = wake_metrics(synthesize_wake(speed, "forward"), speed)
        print(f"{speed:>10.3f} m/s {m.u_prop:>8.4f} m/s {m.wake_width*1000:>8.1f} mm")


if __name__ == "__main__":
    main()
