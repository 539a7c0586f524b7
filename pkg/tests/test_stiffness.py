"""Forward-stiffness adaptation tests."""

import numpy as np
import pytest

from cotransport.core import ComplianceParams, PlanarState
from cotransport.stiffness import (ModulationGains, separation_error,
                                   update_stiffness)


def make_state(pos, vel=(0.0, 0.0)):
    return PlanarState(np.asarray(pos, float), np.asarray(vel, float))


def test_separation_error_axis_aligned():
    params = ComplianceParams(offset=(0.6, 0.0))
    robot = make_state((1.0, 2.0), (0.1, 0.0))
    obj = np.array([1.9, 2.0])
    e, ed = separation_error(robot, obj, np.array([0.4, 0.0]), 0.0, params)
    assert e == pytest.approx(0.3)
    assert ed == pytest.approx(0.3)


def test_separation_error_rotated_frame():
    params = ComplianceParams(offset=(0.6, 0.0))
    robot = make_state((0.0, 0.0))
    # heading pi/2: "ahead" is +y in the world
    obj = np.array([0.0, 0.75])
    e, ed = separation_error(robot, obj, np.zeros(2), np.pi / 2, params)
    assert e == pytest.approx(0.15)
    assert ed == pytest.approx(0.0)
    # purely lateral displacement does not touch the forward error
    e2, _ = separation_error(robot, np.array([0.3, 0.75]), np.zeros(2),
                             np.pi / 2, params)
    assert e2 == pytest.approx(0.15)


def test_update_matches_formula():
    params = ComplianceParams()
    gains = ModulationGains(k_x1=20.0, b_x1=5.0)
    robot = make_state((0.0, 0.0), (0.05, 0.0))
    obj = np.array([0.72, 0.0])
    obj_vel = np.array([0.15, 0.0])
    k = update_stiffness(300.0, robot, obj, obj_vel, 0.0, params, gains)
    e, ed = 0.12, 0.10
    assert k == pytest.approx(300.0 - 20.0 * e - 5.0 * ed)


def test_trailing_relaxes_leading_tightens():
    params = ComplianceParams()
    gains = ModulationGains()
    robot = make_state((0.0, 0.0))
    # object farther ahead than desired: spring relaxes, stepping catches up
    ahead = update_stiffness(200.0, robot, np.array([0.9, 0.0]),
                             np.zeros(2), 0.0, params, gains)
    assert ahead < 200.0
    # robot overshoots past the desired offset: spring tightens
    behind = update_stiffness(200.0, robot, np.array([0.4, 0.0]),
                              np.zeros(2), 0.0, params, gains)
    assert behind > 200.0


def test_equilibrium_is_fixed_point():
    params = ComplianceParams(offset=(0.6, 0.0))
    gains = ModulationGains()
    robot = make_state((2.0, -1.0), (0.3, 0.2))
    obj = robot.pos + np.array([0.6, 0.0])
    k = update_stiffness(150.0, robot, obj, robot.vel.copy(), 0.0, params,
                         gains)
    assert k == pytest.approx(150.0)


def test_clamped_to_range():
    params = ComplianceParams()
    gains = ModulationGains(k_x1=1e4, K_min=5.0, K_max=1000.0)
    robot = make_state((0.0, 0.0))
    low = update_stiffness(100.0, robot, np.array([2.0, 0.0]), np.zeros(2),
                           0.0, params, gains)
    assert low == gains.K_min
    high = update_stiffness(100.0, robot, np.array([0.0, 0.0]),
                            np.zeros(2), 0.0, params, gains)
    assert high == gains.K_max


def test_repeated_updates_converge_inside_range():
    """Driving the error to zero freezes the gain wherever it landed."""
    params = ComplianceParams()
    gains = ModulationGains()
    robot = make_state((0.0, 0.0))
    k = 500.0
    for _ in range(50):
        k = update_stiffness(k, robot, np.array([0.63, 0.0]), np.zeros(2),
                             0.0, params, gains)
    assert gains.K_min <= k <= gains.K_max
    settled = update_stiffness(k, robot, np.array([0.6, 0.0]), np.zeros(2),
                               0.0, params, gains)
    assert settled == pytest.approx(k)


def test_gain_validation():
    with pytest.raises(ValueError):
        ModulationGains(K_min=0.0)
    with pytest.raises(ValueError):
        ModulationGains(K_min=10.0, K_max=5.0)
    with pytest.raises(ValueError):
        ModulationGains(k_x1=-1.0)
    # equal bounds pin the stiffness to a constant, which is allowed
    g = ModulationGains(K_min=10.0, K_max=10.0)
    assert g.K_min == g.K_max == 10.0


def test_gain_defaults():
    g = ModulationGains()
    assert (g.k_x1, g.b_x1, g.K_min, g.K_max) == (20.0, 5.0, 5.0, 1000.0)
