"""Capture point offset and efficiency metric tests."""

import numpy as np
import pytest

from cotransport.core import FootPose, PlanarState
from cotransport.metrics import (EffortWindow, EmptyWindow, ForceSample,
                                 efficiency, load_share_series,
                                 mean_efficiency,
                                 modified_capture_point_offset)


def make_record(t, F_h, F_r, v_b):
    return [ForceSample(float(ti), fh, fr, vb)
            for ti, fh, fr, vb in zip(t, F_h, F_r, v_b)]


# capture point


def test_zero_force_reduces_to_classic_capture_point():
    robot = PlanarState(np.array([0.3, -0.1]), np.array([0.5, 0.2]))
    foot = FootPose(np.array([0.25, -0.2]), heading=0.0)
    omega = 3.3
    eps = modified_capture_point_offset(robot, foot, np.zeros(2), 45.0,
                                        omega)
    classic = robot.pos + robot.vel / omega - foot.pos
    assert np.allclose(eps, classic)


def test_force_shifted_equilibrium_has_zero_offset():
    m, omega = 45.0, 3.3
    force = np.array([40.0, -15.0])
    foot = FootPose(np.array([0.1, 0.05]), heading=0.7)
    robot = PlanarState(foot.pos - force / (m * omega ** 2), np.zeros(2))
    eps = modified_capture_point_offset(robot, foot, force, m, omega)
    assert np.allclose(eps, 0.0, atol=1e-12)


def test_capture_point_generic_value():
    m, omega = 45.0, 3.3029732914372635
    robot = PlanarState(np.array([0.42, -0.13]), np.array([0.31, 0.18]))
    foot = FootPose(np.array([0.36, -0.22]), heading=0.55)
    force = np.array([28.0, -9.0])
    eps = modified_capture_point_offset(robot, foot, force, m, omega)
    # scalar arithmetic straight from the definition
    shift = force / (m * omega ** 2)
    xi = robot.pos + shift + robot.vel / omega
    c, s = np.cos(0.55), np.sin(0.55)
    d = xi - foot.pos
    expected = np.array([c * d[0] + s * d[1], -s * d[0] + c * d[1]])
    assert np.allclose(eps, expected, atol=1e-14)


def test_capture_point_rejects_bad_omega():
    robot = PlanarState(np.zeros(2), np.zeros(2))
    foot = FootPose(np.zeros(2))
    with pytest.raises(ValueError):
        modified_capture_point_offset(robot, foot, np.zeros(2), 45.0, 0.0)


# efficiency


def test_single_agent_is_fully_efficient():
    t = np.arange(0.0, 20.0, 0.01)
    F_h = np.stack([np.sin(t), 0.3 * np.cos(t)], axis=1)
    F_r = np.zeros((t.size, 2))
    v_b = np.stack([np.cos(0.7 * t), np.sin(0.7 * t)], axis=1)
    _, eta = efficiency(make_record(t, F_h, F_r, v_b))
    assert np.allclose(eta, 1.0, atol=1e-12)


def test_perfect_opposition_scores_zero():
    t = np.arange(0.0, 20.0, 0.01)
    F_h = np.stack([1.0 + 0.2 * np.sin(t), np.zeros_like(t)], axis=1)
    v_b = np.stack([0.5 * np.ones_like(t), np.zeros_like(t)], axis=1)
    _, eta = efficiency(make_record(t, F_h, -F_h, v_b))
    assert np.allclose(eta, 0.0, atol=1e-12)


def test_proportional_opposition_exact_ratio():
    """F_r = -c F_h gives eta = (1-c)/(1+c) independent of quadrature."""
    t = np.arange(0.0, 15.0, 0.005)
    F_h = np.stack([np.sin(1.3 * t) + 0.2, 0.4 * np.cos(t)], axis=1)
    v_b = np.stack([np.cos(0.4 * t), 0.1 * np.sin(t)], axis=1)
    c = 0.25
    _, eta = efficiency(make_record(t, F_h, -c * F_h, v_b))
    assert np.allclose(eta, (1 - c) / (1 + c), atol=1e-9)


def test_bounded_and_windowed_against_direct_quadrature():
    rng = np.random.default_rng(11)
    t = np.arange(0.0, 12.0, 0.01)
    F_h = rng.normal(0, 20, (t.size, 2))
    F_r = rng.normal(0, 20, (t.size, 2))
    v_b = rng.normal(0, 0.5, (t.size, 2))
    window = EffortWindow(width=4.0, stride=0.5)
    times, eta = efficiency(make_record(t, F_h, F_r, v_b), window)
    assert np.all(eta >= 0.0) and np.all(eta <= 1.0 + 1e-12)
    # independent per-window trapezoids over explicit slices
    p_h = np.einsum("ij,ij->i", F_h, v_b)
    p_r = np.einsum("ij,ij->i", F_r, v_b)
    for tw, ew in zip(times, eta):
        lo, hi = tw - window.width, tw
        mask = (t >= lo - 1e-12) & (t <= hi + 1e-12)
        e_n = np.trapezoid(np.abs(p_h + p_r)[mask], t[mask])
        e_s = np.trapezoid((np.abs(p_h) + np.abs(p_r))[mask], t[mask])
        assert ew == pytest.approx(e_n / e_s, abs=1e-9)


def test_time_rescaling_invariance():
    rng = np.random.default_rng(5)
    t = np.arange(0.0, 10.0, 0.01)
    F_h = rng.normal(0, 10, (t.size, 2))
    F_r = rng.normal(0, 10, (t.size, 2))
    v_b = rng.normal(0, 1, (t.size, 2))
    w1 = EffortWindow(width=3.0, stride=0.25)
    w2 = EffortWindow(width=6.0, stride=0.5)
    _, eta1 = efficiency(make_record(t, F_h, F_r, v_b), w1)
    _, eta2 = efficiency(make_record(2.0 * t, F_h, F_r, v_b), w2)
    assert np.allclose(eta1, eta2, atol=1e-12)


def test_shared_sign_windows_are_fully_efficient():
    # both partners always push along the motion, with different shapes
    t = np.arange(0.0, 9.0, 0.01)
    F_h = np.stack([2.0 + np.sin(3 * t), np.zeros_like(t)], axis=1)
    F_r = np.stack([0.5 + 0.4 * np.cos(5 * t), np.zeros_like(t)], axis=1)
    v_b = np.stack([0.3 + 0.2 * np.sin(t), np.zeros_like(t)], axis=1)
    _, eta = efficiency(make_record(t, F_h, F_r, v_b),
                        EffortWindow(width=2.0, stride=0.5))
    assert np.allclose(eta, 1.0, atol=1e-12)


def test_idle_record_counts_as_efficient():
    t = np.arange(0.0, 9.0, 0.01)
    zeros = np.zeros((t.size, 2))
    _, eta = efficiency(make_record(t, zeros, zeros, zeros),
                        EffortWindow(width=2.0, stride=0.5))
    assert np.allclose(eta, 1.0)


def test_forward_axis_variant():
    t = np.arange(0.0, 9.0, 0.01)
    # lateral opposition that the forward-axis variant must ignore
    F_h = np.stack([np.ones_like(t), 30 * np.sin(t)], axis=1)
    F_r = np.stack([0.5 * np.ones_like(t), -30 * np.sin(t)], axis=1)
    v_b = np.stack([0.4 * np.ones_like(t), 0.2 * np.cos(t)], axis=1)
    window = EffortWindow(width=2.0, stride=0.5)
    record = make_record(t, F_h, F_r, v_b)
    _, eta_full = efficiency(record, window)
    _, eta_fwd = efficiency(record, window, headings=np.zeros(t.size))
    assert np.all(eta_full < 1.0 - 1e-3)
    assert np.allclose(eta_fwd, 1.0, atol=1e-12)
    # rotated heading picks out the rotated forward axis
    quarter = efficiency(record, window,
                         headings=np.full(t.size, np.pi / 2))[1]
    assert np.all(quarter < 1.0 - 1e-3)


def test_mean_efficiency_matches_mean():
    t = np.arange(0.0, 12.0, 0.01)
    rng = np.random.default_rng(2)
    F_h = rng.normal(0, 5, (t.size, 2))
    F_r = rng.normal(0, 5, (t.size, 2))
    v_b = rng.normal(0, 1, (t.size, 2))
    window = EffortWindow(width=3.0, stride=1.0)
    record = make_record(t, F_h, F_r, v_b)
    _, eta = efficiency(record, window)
    assert mean_efficiency(record, window) == pytest.approx(
        float(np.mean(eta)))


def test_short_record_raises():
    t = np.arange(0.0, 1.0, 0.01)
    zeros = np.zeros((t.size, 2))
    with pytest.raises(EmptyWindow):
        efficiency(make_record(t, zeros, zeros, zeros),
                   EffortWindow(width=5.0, stride=0.1))


def test_window_validation():
    with pytest.raises(ValueError):
        EffortWindow(width=0.1, stride=0.5)
    with pytest.raises(ValueError):
        EffortWindow(width=1.0, stride=0.0)


def test_non_monotone_record_rejected():
    samples = [ForceSample(0.0, np.zeros(2), np.zeros(2), np.zeros(2)),
               ForceSample(0.0, np.zeros(2), np.zeros(2), np.zeros(2))]
    with pytest.raises(ValueError):
        efficiency(samples, EffortWindow(width=0.1, stride=0.01))


# load share


def test_load_share_values():
    t = np.array([0.0, 1.0, 2.0, 3.0])
    fzr = np.array([50.0, 100.0, 0.0, 0.0])
    fzh = np.array([50.0, 0.0, 80.0, 0.0])
    _, share = load_share_series(t, fzr, fzh)
    assert np.allclose(share, [0.5, 1.0, 0.0, 0.5])
