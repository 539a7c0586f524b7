"""Reduced interaction allocator and swing-foot kinematics.

A small QP distributes the desired accelerations between the robot CoM,
the object and the net hand wrench, subject to the object's planar
dynamics and actuation bounds.  The full articulated problem is
abstracted to a point-mass robot with bounded CoM acceleration
authority; hand forces are aggregated to a single net wrench.
"""

from dataclasses import dataclass

import numpy as np

from .qp import QpProblem, solve


@dataclass
class WbcParams:
    """Tracking weights, force bounds and the object yaw inertia."""

    w_robot_acc: float = 1.0
    w_object_acc: float = 1.0
    w_yaw_acc: float = 1.0
    w_force: float = 2e-4
    force_bound: float = 150.0    # per-axis net hand force, N
    moment_bound: float = 40.0    # net hand yaw moment, N m
    accel_bound: float = 6.0      # robot CoM acceleration, per axis
    yaw_inertia: float = 0.6      # object inertia about vertical

    def __post_init__(self):
        if min(self.w_robot_acc, self.w_object_acc, self.w_yaw_acc) <= 0:
            raise ValueError("tracking weights must be positive")
        if self.w_force < 0:
            raise ValueError("force weight must be nonnegative")
        if min(self.force_bound, self.moment_bound, self.accel_bound,
               self.yaw_inertia) <= 0:
            raise ValueError("bounds and inertia must be positive")


@dataclass
class HandWrench:
    """Net planar wrench at the hands, acting on the robot (reaction on
    the object is its negative)."""

    f_xy: np.ndarray
    f_z: float = 0.0
    m_z: float = 0.0

    def __post_init__(self):
        self.f_xy = np.asarray(self.f_xy, dtype=float).reshape(2)


@dataclass
class WbcOutput:
    robot_acc: np.ndarray
    object_acc: np.ndarray
    object_yaw_acc: float
    wrench: HandWrench

    def __post_init__(self):
        self.robot_acc = np.asarray(self.robot_acc, dtype=float).reshape(2)
        self.object_acc = np.asarray(self.object_acc,
                                     dtype=float).reshape(2)


def solve_interaction_qp(des, leader_force, leader_moment, params, wbc,
                         warm=None):
    """Allocate accelerations and the net hand wrench.

    Decision variables: robot CoM acceleration (2), object acceleration
    (2), object yaw acceleration (1), hand force on the robot (2), hand
    yaw moment on the robot (1).  The object obeys
    m_object * a_obj = leader_force - f_xy and
    yaw_inertia * yaw_acc = leader_moment - m_z.
    Returns (WbcOutput, QpSolution); the solution warm starts the next
    tick.
    """
    leader_force = np.asarray(leader_force, dtype=float).reshape(2)
    H = np.zeros((8, 8))
    f = np.zeros(8)
    H[0, 0] = H[1, 1] = 2.0 * wbc.w_robot_acc
    H[2, 2] = H[3, 3] = 2.0 * wbc.w_object_acc
    H[4, 4] = 2.0 * wbc.w_yaw_acc
    H[5, 5] = H[6, 6] = 2.0 * wbc.w_force
    f[0:2] = -2.0 * wbc.w_robot_acc * des.robot
    f[2:4] = -2.0 * wbc.w_object_acc * des.obj
    f[4] = -2.0 * wbc.w_yaw_acc * des.obj_yaw

    A_eq = np.zeros((3, 8))
    b_eq = np.zeros(3)
    # m_o * a_obj + f_xy = F_leader
    A_eq[0, 2] = A_eq[1, 3] = params.m_object
    A_eq[0, 5] = A_eq[1, 6] = 1.0
    b_eq[0:2] = leader_force
    # I_z * yaw_acc + m_z = M_leader
    A_eq[2, 4] = wbc.yaw_inertia
    A_eq[2, 7] = 1.0
    b_eq[2] = float(leader_moment)

    A_in = np.zeros((5, 8))
    A_in[0, 0] = A_in[1, 1] = 1.0   # robot acceleration authority
    A_in[2, 5] = A_in[3, 6] = 1.0   # hand force
    A_in[4, 7] = 1.0                # hand moment
    a, fb, mb = wbc.accel_bound, wbc.force_bound, wbc.moment_bound
    lower = np.array([-a, -a, -fb, -fb, -mb])
    upper = np.array([a, a, fb, fb, mb])

    problem = QpProblem(H, f, A_eq, b_eq, A_in, lower, upper)
    sol = solve(problem, warm=warm)
    x = sol.x
    out = WbcOutput(x[0:2], x[2:4], float(x[4]),
                    HandWrench(x[5:7], 0.0, float(x[7])))
    return out, sol


def vertical_load_share(params, gravity=9.81, share=0.55):
    """Split the object weight between robot hands and leader.

    Returns (robot carried force, leader carried force), both upward.
    """
    if not 0.0 <= share <= 1.0:
        raise ValueError("share must lie in [0, 1]")
    w = params.m_object * gravity
    return share * w, (1.0 - share) * w


def swing_foot_position(start, target, phase, cfg):
    """Swing foot pose during a step.

    start is the 3d liftoff point, target the 2d touchdown; xy follows a
    cosine blend, height a quartic bump peaking at swing_height.
    """
    s = float(np.clip(phase, 0.0, 1.0))
    start = np.asarray(start, dtype=float).reshape(3)
    target = np.asarray(target, dtype=float).reshape(2)
    blend = 0.5 * (1.0 - np.cos(np.pi * s))
    xy = start[:2] + blend * (target - start[:2])
    z = start[2] * (1.0 - s) + 16.0 * cfg.swing_height * s * s \
        * (1.0 - s) * (1.0 - s)
    return np.array([xy[0], xy[1], z])


def advance_phase(t_in_step, dt, cfg):
    """Step the in-step clock; returns (new t, phase in [0,1], strike)."""
    t = t_in_step + dt
    if t >= cfg.step_duration - 1e-12:
        return 0.0, 1.0, True
    return t, t / cfg.step_duration, False
