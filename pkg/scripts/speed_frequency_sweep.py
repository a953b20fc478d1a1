#!/usr/bin/env python3
"""Sweep blocked force over actuation frequency and voltage for each design.

Writes sweep CSVs and a two-panel figure (force vs frequency, force vs
voltage) into ./out/.
"""

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from flatswim.thrust import ModuleDesign, blocked_force, default_calibration

OUT = Path(__file__).resolve().parent.parent / "out"
OUT.mkdir(exist_ok=True)


def main():
    cal = default_calibration()
    pet = ModuleDesign("PET", 45, 20, 2)
    pvdf = ModuleDesign("PVDF", 45, 20, 2)

    freqs = np.linspace(5.0, 90.0, 171)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))

    rows = []
    for design, volts, label in ((pet, 1500.0, "PET @ 1500 V"), (pvdf, 500.0, "PVDF @ 500 V")):
        forces = [blocked_force(cal, design, f, volts) for f in freqs]
        ax1.plot(freqs, forces, label=label)
        rows += [(design.variant, f, volts, F) for f, F in zip(freqs, forces)]
    ax1.set_xlabel("actuation frequency (Hz)")
    ax1.set_ylabel("blocked force (mN)")
    ax1.legend()

    voltages = np.linspace(0.0, 2000.0, 201)
    for design, f_opt, label in ((pet, 40.0, "PET @ 40 Hz"), (pvdf, 30.0, "PVDF @ 30 Hz")):
        forces = [blocked_force(cal, design, f_opt, v) for v in voltages]
        ax2.plot(voltages, forces, label=label)
        rows += [(design.variant, f_opt, v, F) for v, F in zip(voltages, forces)]
    ax2.set_xlabel("voltage (V)")
    ax2.set_ylabel("blocked force (mN)")
    ax2.legend()

    fig.tight_layout()
    fig.savefig(OUT / "force_sweeps.png", dpi=150)

    with open(OUT / "force_sweeps.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["variant", "f_act_hz", "voltage_v", "force_mn"])
        w.writerows(rows)
    print(f"wrote {OUT/'force_sweeps.png'} and {OUT/'force_sweeps.csv'}")


if __name__ == "__main__":
    main()
