import math

import numpy as np
import pytest

from flatswim.flow.field import FlowField, load_field_json, save_field_json
from flatswim.flow.wake import (
    WakeParams,
    lamb_oseen_circulation,
    lamb_oseen_velocity,
    synthesize_wake,
    wake_metrics,
)


class TestSynthesizeWake:
    def test_forward_mode_exact_mirror_symmetry(self):
        fld = synthesize_wake(0.01, "forward")
        assert np.abs(fld.u - fld.u[::-1, :]).max() <= 1e-12
        assert np.abs(fld.v + fld.v[::-1, :]).max() <= 1e-12

    def test_turning_with_unit_asymmetry_equals_forward(self):
        forward = synthesize_wake(0.01, "forward")
        turning = synthesize_wake(0.01, "turning", WakeParams(asymmetry=1.0))
        assert np.array_equal(forward.u, turning.u)
        assert np.array_equal(forward.v, turning.v)

    def test_turning_breaks_symmetry(self):
        fld = synthesize_wake(0.01, "turning", WakeParams(asymmetry=0.4))
        assert np.abs(fld.u - fld.u[::-1, :]).max() > 1e-6

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            synthesize_wake(0.01, "sideways")

    def test_circulation_line_integral_matches_closed_form(self):
        # Numeric circulation around a single vortex vs the closed form.
        gamma, rc = 2.0e-4, 0.012
        radius = 0.02
        n = 4000
        theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        cx = radius * np.cos(theta)
        cy = radius * np.sin(theta)
        u, v = lamb_oseen_velocity(cx, cy, (0.0, 0.0), gamma, rc)
        # Tangential component integrated along the circle.
        tx, ty = -np.sin(theta), np.cos(theta)
        circ = float(np.sum(u * tx + v * ty) * (2.0 * np.pi * radius / n))
        assert circ == pytest.approx(lamb_oseen_circulation(radius, gamma, rc), rel=0.02)

    def test_wake_strength_scales_with_robot_speed(self):
        slow = synthesize_wake(0.01, "forward")
        fast = synthesize_wake(0.02, "forward")
        assert np.allclose(fast.u, 2.0 * slow.u, rtol=1e-12, atol=0.0)


class TestWakeMetrics:
    def test_zero_field_flagged(self):
        fld = FlowField(u=np.zeros((41, 61)), v=np.zeros((41, 61)), spacing=2e-3)
        m = wake_metrics(fld, robot_speed=0.01)
        assert not m.valid
        assert m.u_prop == pytest.approx(-0.01)
        assert m.wake_width == 0.0

    def test_frame_subtraction_on_synthetic_jet(self):
        # Jet-only wake: centerline peak is the jet peak itself.
        params = WakeParams(circulation=0.0, jet_peak=0.03)
        fld = synthesize_wake(0.01, "forward", params)
        m = wake_metrics(fld, robot_speed=0.01)
        assert m.valid
        assert m.u_prop == pytest.approx(0.03 - 0.01, rel=1e-6)

    def test_width_halves_with_jet_sigma(self):
        wide = wake_metrics(
            synthesize_wake(0.01, "forward", WakeParams(circulation=0.0, jet_sigma=0.012)),
            robot_speed=0.01,
        )
        narrow = wake_metrics(
            synthesize_wake(0.01, "forward", WakeParams(circulation=0.0, jet_sigma=0.006)),
            robot_speed=0.01,
        )
        assert narrow.wake_width == pytest.approx(wide.wake_width / 2.0, rel=0.02)
        # Gaussian full width at half maximum.
        assert wide.wake_width == pytest.approx(2.0 * math.sqrt(2.0 * math.log(2.0)) * 0.012, rel=0.02)

    def test_metrics_invariant_under_translation(self):
        fld = synthesize_wake(0.01, "forward")
        moved = fld.translated(0.5, -0.3)
        m0 = wake_metrics(fld, 0.01)
        m1 = wake_metrics(moved, 0.01)
        assert m1.u_prop == m0.u_prop
        assert m1.wake_width == pytest.approx(m0.wake_width, rel=1e-9)


def test_field_json_round_trip(tmp_path):
    fld = synthesize_wake(0.01, "forward", WakeParams(nx=31, ny=21))
    path = tmp_path / "field.json"
    save_field_json(path, fld)
    back = load_field_json(path)
    assert np.array_equal(back.u, fld.u)
    assert np.array_equal(back.v, fld.v)
    assert back.spacing == fld.spacing
    assert back.origin == fld.origin


def test_field_validation():
    with pytest.raises(ValueError):
        FlowField(u=np.zeros((4, 4)), v=np.zeros((4, 5)))
    with pytest.raises(ValueError):
        FlowField(u=np.full((4, 4), np.nan), v=np.zeros((4, 4)))
    with pytest.raises(ValueError):
        FlowField(u=np.zeros((4, 4)), v=np.zeros((4, 4)), spacing=0.0)
