"""Stepping model: pendulum dynamics coupled to the carried object.

The robot CoM is modelled as a linear inverted pendulum anchored at the
stance foot, pulled by a rotated spring/damper toward the moving object
at the desired relative offset.  The object is assumed to advance with
the estimated leader velocity within a step.
"""

import numpy as np

from .core import PlanarState, IntentEstimate, normalize_angle, rotation_matrix
from .linflow import coupled_step_matrices


def update_intent(estimate, measured_vel, measured_yaw):
    """Blend a velocity/yaw measurement into the intent estimate.

    Velocity uses a plain exponential moving average with retain factor
    alpha; yaw blends along the shortest angular arc with factor beta.
    """
    alpha, beta = estimate.alpha, estimate.beta
    vel = alpha * estimate.vel + (1.0 - alpha) * np.asarray(measured_vel,
                                                            dtype=float)
    yaw = normalize_angle(
        estimate.yaw + (1.0 - beta) * normalize_angle(measured_yaw
                                                      - estimate.yaw))
    return IntentEstimate(vel, yaw, alpha, beta)


def ilip_accel(robot, foot, obj_pos, obj_vel, params, cfg):
    """Instantaneous modelled CoM acceleration at the current state."""
    R = rotation_matrix(foot.heading)
    omega2 = cfg.omega ** 2
    sep = np.asarray(obj_pos, dtype=float) - robot.pos
    e_loc = R.T @ sep - params.offset
    dv_loc = R.T @ (np.asarray(obj_vel, dtype=float) - robot.vel)
    spring = R @ (params.k_couple * e_loc + params.b_couple * dv_loc)
    return omega2 * (robot.pos - foot.pos) + spring / params.m_robot


def ilip_step_matrices(heading, obj_pos, obj_vel, params, cfg,
                       duration=None):
    """Affine one-step map (A, B, c): X+ = A X + B u + c, X = (pos, vel)."""
    T = cfg.step_duration if duration is None else duration
    return coupled_step_matrices(heading, params.k_couple, params.b_couple,
                                 params.offset, params.m_robot,
                                 cfg.omega ** 2, obj_pos, obj_vel, T,
                                 with_foot=True)


def ilip_step_map(robot, foot, obj_pos, obj_vel, params, cfg,
                  duration=None):
    """Exact CoM state after one step of the coupled pendulum dynamics."""
    A, B, c = ilip_step_matrices(foot.heading, obj_pos, obj_vel, params,
                                 cfg, duration)
    x = A @ robot.as_vector() + B @ foot.pos + c
    return PlanarState.from_vector(x)


def object_step_map(obj, intent_vel, cfg, duration=None):
    """Object advanced one step at the estimated leader velocity."""
    T = cfg.step_duration if duration is None else duration
    v = np.asarray(intent_vel, dtype=float)
    return PlanarState(obj.pos + v * T, v.copy())
