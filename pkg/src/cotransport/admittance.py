"""Compliance shaping: goal rollouts and hand-level desired accelerations.

The goal rollout is a virtual mass at the robot CoM dragged by a rotated
spring/damper toward the object at the desired offset; rolling it over
the planning horizon produces the footstep planner's CoM goals.  A
second-order tracking filter on the heading produces the matching
heading sequence.  The hand-level model turns the same spring forces
into desired accelerations for the robot, the object and the object yaw.
"""

from dataclasses import dataclass

import numpy as np

from .core import PlanarState, normalize_angle, rotation_matrix
from .linflow import coupled_step_matrices, damped_tracking_flow


@dataclass
class GoalSet:
    """Per-step CoM goals and stance headings over the planning horizon."""

    com_goals: list
    headings: np.ndarray

    def __post_init__(self):
        self.headings = np.asarray(self.headings, dtype=float).reshape(-1)
        if len(self.com_goals) != len(self.headings):
            raise ValueError("one heading per goal required")


@dataclass
class DesiredAccels:
    robot: np.ndarray
    obj: np.ndarray
    obj_yaw: float

    def __post_init__(self):
        self.robot = np.asarray(self.robot, dtype=float).reshape(2)
        self.obj = np.asarray(self.obj, dtype=float).reshape(2)


def admittance_step_matrices(heading, obj_pos, obj_vel, params, cfg,
                             duration=None):
    """Affine one-step map (A, c) of the goal-rollout dynamics."""
    T = cfg.step_duration if duration is None else duration
    A, _, c = coupled_step_matrices(heading, params.k_goal, params.b_goal,
                                    params.offset, params.m_plan, 0.0,
                                    obj_pos, obj_vel, T, with_foot=False)
    return A, c


def admittance_step_map(state, heading, obj_pos, obj_vel, params, cfg,
                        duration=None):
    """Goal-rollout state advanced one step (exact flow)."""
    A, c = admittance_step_matrices(heading, obj_pos, obj_vel, params, cfg,
                                    duration)
    return PlanarState.from_vector(A @ state.as_vector() + c)


def admittance_accel(state, obj_pos, v_b_d, heading, params):
    """Instantaneous acceleration of the goal-admittance flow.

    Same spring/damper law the step map integrates, evaluated pointwise
    so a harness can advance the flow tick by tick against the measured
    object instead of a frozen straight-line prediction of it.
    """
    R = rotation_matrix(heading)
    e_loc = R.T @ (np.asarray(obj_pos, dtype=float) - state.pos) \
        - params.offset
    dv_loc = R.T @ (np.asarray(v_b_d, dtype=float) - state.vel)
    return R @ (params.k_goal * e_loc + params.b_goal * dv_loc) \
        / params.m_plan


def yaw_admittance_step(heading, rate, target, params, cfg, duration=None):
    """One exact step of heading'' = kp (target - heading) - kd heading'."""
    T = cfg.step_duration if duration is None else duration
    phi = damped_tracking_flow(params.kp_heading, params.kd_heading, T)
    e = np.array([normalize_angle(heading - target), rate])
    e = phi @ e
    return normalize_angle(target + e[0]), e[1]


def build_goal_set(robot, heading, heading_rate, obj_pos, intent, params,
                   cfg):
    """Roll the goal dynamics over the horizon from the current state.

    com_goals[i] and headings[i] describe the end of the (i+1)-th step
    from now; the object is assumed to move at the estimated velocity.
    """
    com_goals = []
    headings = np.zeros(cfg.horizon)
    state = robot.copy()
    th, rate = heading, heading_rate
    obj = np.asarray(obj_pos, dtype=float).copy()
    for i in range(cfg.horizon):
        state = admittance_step_map(state, th, obj, intent.vel, params, cfg)
        th, rate = yaw_admittance_step(th, rate, intent.yaw, params, cfg)
        obj = obj + intent.vel * cfg.step_duration
        com_goals.append(state.copy())
        headings[i] = th
    return GoalSet(com_goals, headings)


def hand_spring_force(robot, obj, heading, params):
    """World-frame force of the hand-level spring/damper on the robot."""
    R = rotation_matrix(heading)
    e_loc = R.T @ (obj.pos - robot.pos) - params.offset
    dv_loc = R.T @ (obj.vel - robot.vel)
    return R @ (params.k_hand * e_loc + params.b_hand * dv_loc)


def desired_accels(robot, obj, obj_yaw, obj_yaw_rate, heading,
                   leader_force, params, plan_pos=None, plan_vel=None,
                   plan_acc=None):
    """Hand-level desired accelerations for robot, object and object yaw.

    The robot target combines yielding to the measured hand force with a
    PD pull toward the stepped plan trajectory when one is given, plus
    the plan's own acceleration as feedforward so the PD only corrects
    residuals.  The hand shares satisfy
    m_robot * a_robot + m_object * a_obj = leader_force exactly when no
    plan is supplied.
    """
    s = hand_spring_force(robot, obj, heading, params)
    a_robot = s / params.m_robot
    if plan_pos is not None:
        a_robot = (a_robot + params.track_kp * (plan_pos - robot.pos)
                   + params.track_kd * (plan_vel - robot.vel))
        if plan_acc is not None:
            a_robot = a_robot + np.asarray(plan_acc, dtype=float)
    a_obj = (np.asarray(leader_force, dtype=float) - s) / params.m_object
    yaw_acc = (params.kp_yaw * normalize_angle(heading - obj_yaw)
               - params.kd_yaw * obj_yaw_rate)
    return DesiredAccels(a_robot, a_obj, yaw_acc)
