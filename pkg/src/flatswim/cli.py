"""Command-line interface: run, serve, report, piv-selftest, lic, calibrate."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np


def _cmd_run(args: argparse.Namespace) -> int:
    from flatswim.engine import run
    from flatswim.scenario import load_bundled, load_scenario

    path = Path(args.scenario)
    config = load_scenario(path) if path.exists() else load_bundled(args.scenario)
    telemetry = args.telemetry or f"{config.name}_telemetry.csv"
    result = run(config, telemetry_path=telemetry, workers=args.workers)
    print(json.dumps(result.summary, indent=2, sort_keys=True))
    if args.summary:
        Path(args.summary).write_text(
            json.dumps(result.summary, indent=2, sort_keys=True) + "\n"
        )
    print(f"telemetry: {result.telemetry_path}", file=sys.stderr)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from flatswim.scenario import load_bundled, load_scenario
    from flatswim.server import serve

    path = Path(args.scenario)
    config = load_scenario(path) if path.exists() else load_bundled(args.scenario)
    serve(config, port=args.port, host=args.host, stream_hz=args.stream_hz)
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    from flatswim.engine import read_telemetry
    from flatswim.report import report

    rows = read_telemetry(args.telemetry)
    files = report(rows, args.kind, args.out, seed=args.seed, workers=args.workers)
    for f in files:
        print(f)
    return 0


def _cmd_piv_selftest(args: argparse.Namespace) -> int:
    from flatswim.flow.field import FlowField
    from flatswim.flow.piv import PivParams, piv_correlate, synth_particles

    size = args.size
    shape = (size, size)
    grid = np.ones((size // 16 + 1, size // 16 + 1))
    fld = FlowField(u=3.0 * grid, v=-2.0 * grid, spacing=16.0)
    fa, fb = synth_particles(fld, dt=1.0, seed=args.seed, density=0.02, shape=shape)
    t0 = time.perf_counter()
    res = piv_correlate(fa, fb, PivParams(), workers=args.workers)
    elapsed = time.perf_counter() - t0
    margin = 5
    inner = np.ix_(
        range(margin, len(res.y) - margin), range(margin, len(res.x) - margin)
    )
    rms = float(np.sqrt(np.mean((res.u[inner] - 3.0) ** 2 + (res.v[inner] + 2.0) ** 2)))
    ok = rms < 0.1
    print(f"uniform shift (3, -2) px: RMS error {rms:.4f} px in {elapsed:.2f} s "
          f"[{'PASS' if ok else 'FAIL'}]")
    return 0 if ok else 1


def _cmd_lic(args: argparse.Namespace) -> int:
    from flatswim.flow.field import load_field_json
    from flatswim.flow.images import save_image
    from flatswim.flow.lic import lic_render
    from flatswim.flow.wake import synthesize_wake

    if args.field in ("forward", "turning"):
        from flatswim.flow.wake import WakeParams

        params = WakeParams(asymmetry=0.35) if args.field == "turning" else WakeParams()
        fld = synthesize_wake(args.speed, args.field, params)
    else:
        fld = load_field_json(args.field)
    img = lic_render(fld, seed=args.seed, kernel_length=args.kernel, workers=args.workers)
    save_image(args.out, img)
    print(args.out)
    return 0


def _cmd_calibrate(args: argparse.Namespace) -> int:
    from flatswim.calibrate import calibrate

    print(json.dumps(calibrate(args.target), indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatswim",
        description="Simulator and analysis toolkit for flat undulating-fin surface swimmers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario file or bundled scenario name")
    p.add_argument("scenario")
    p.add_argument("--telemetry", default=None, help="telemetry CSV output path")
    p.add_argument("--summary", default=None, help="summary JSON output path")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("serve", help="serve a live simulation over WebSocket")
    p.add_argument("scenario")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--stream-hz", type=float, default=30.0)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("report", help="generate artifacts from a telemetry CSV")
    p.add_argument("telemetry")
    p.add_argument("--kind", required=True,
                   choices=["speed-curve", "force-map", "lic-frame", "summary"])
    p.add_argument("--out", default="reports")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("piv-selftest", help="verify PIV against the synthetic shift oracle")
    p.add_argument("--size", type=int, default=1024)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_piv_selftest)

    p = sub.add_parser("lic", help="render a field (JSON file, or 'forward'/'turning' wake)")
    p.add_argument("field")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default="lic.pgm")
    p.add_argument("--speed", type=float, default=0.01, help="robot speed for wake synthesis")
    p.add_argument("--kernel", type=float, default=15.0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_lic)

    p = sub.add_parser("calibrate", help="derive fitted dynamics constants from anchors")
    p.add_argument("--target", required=True,
                   choices=["tethered", "untethered", "four-actuator", "all"])
    p.set_defaults(func=_cmd_calibrate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
