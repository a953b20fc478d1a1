#!/usr/bin/env python3
"""Map the converter output over its control space and tabulate endurance."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from flatswim.hvps import ConverterConfig, PowerState, battery_endurance, output_voltage

OUT = Path(__file__).resolve().parent.parent / "out"
OUT.mkdir(exist_ok=True)


def main():
    pws = np.linspace(1.0, 3.0, 41) * 1e-6
    fss = np.linspace(1.0, 20.0, 39) * 1e3
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.2), sharey=True)
    for ax, channels in zip(axes, (0, 1, 2)):
        grid = np.array(
            [[output_voltage(ConverterConfig(pw, fs), channels) for pw in pws] for fs in fss]
        )
        im = ax.pcolormesh(pws * 1e6, fss * 1e-3, grid, shading="auto")
        ax.set_title(f"{channels} channel(s) loaded")
        ax.set_xlabel("pulse width (us)")
        fig.colorbar(im, ax=ax, label="V")
    axes[0].set_ylabel("switching frequency (kHz)")
    fig.tight_layout()
    fig.savefig(OUT / "hvps_output_map.png", dpi=150)
    print(f"wrote {OUT/'hvps_output_map.png'}")

    print("\nendurance of the 30 mAh / 3.7 V battery:")
    for label, state in (
        ("idle", PowerState("idle")),
        ("converter on", PowerState("converter_on")),
        ("driving 1 ch @ 30 Hz", PowerState("driving", 1, 30.0)),
        ("driving 2 ch @ 30 Hz", PowerState("driving", 2, 30.0)),
    ):
        t = battery_endurance(30.0, 3.7, state)
        print(f"  {label:24s} {t:7.1f} s = {t/60.0:5.2f} min")


if __name__ == "__main__":
    main()
