"""Exact flows of the per-axis linear stepping/goal dynamics.

In the stance-local frame every model used here reduces, axis by axis, to

    z'' = a z + c z' + d0 + d1 t

with constant coefficients over one step.  Augmenting the state with the
constant-and-ramp forcing channels makes the flow a single matrix
exponential, which also yields the transition/input matrices the footstep
planner needs (the flow is affine in the initial state and the foothold).
"""

import numpy as np
from scipy.linalg import expm

from .core import rotation_matrix


def axis_flow(a, c, duration):
    """Exact flow pieces for z'' = a z + c z' + d0 + d1 t over `duration`.

    Returns (phi, g0, g1): phi is the 2x2 homogeneous transition on
    (z, z'), g0 the response to unit constant forcing, g1 to unit ramp.
    """
    m = np.array([[0.0, 1.0, 0.0, 0.0],
                  [a, c, 0.0, 1.0],
                  [0.0, 0.0, 0.0, 0.0],
                  [0.0, 0.0, 1.0, 0.0]])
    e = expm(m * duration)
    return e[:2, :2], e[:2, 3].copy(), e[:2, 2].copy()


def coupled_step_matrices(heading, k2, b2, offset, mass, omega2, obj_pos,
                          obj_vel, duration, with_foot):
    """World-frame affine one-step map of the coupled planar dynamics.

    The modelled acceleration is

        omega2 * (x - u) + R K R^T (obj(t) - x - R offset) / mass
                         + R B R^T (obj_vel - x') / mass

    with obj(t) = obj_pos + obj_vel * t and R the heading rotation; K, B
    are diagonal with entries k2, b2.  Returns (A, B, c) such that the
    stacked state X = (pos, vel) maps to A @ X + B @ u + c after one step
    (B is None when with_foot is false; then omega2 must be 0).
    """
    R = rotation_matrix(heading)
    bl = R.T @ np.asarray(obj_pos, dtype=float)
    vl = R.T @ np.asarray(obj_vel, dtype=float)
    A_l = np.zeros((4, 4))
    B_l = np.zeros((4, 2)) if with_foot else None
    c_l = np.zeros(4)
    for i in range(2):
        a = omega2 - k2[i] / mass
        c = -b2[i] / mass
        phi, g0, g1 = axis_flow(a, c, duration)
        A_l[i, i] = phi[0, 0]
        A_l[i, i + 2] = phi[0, 1]
        A_l[i + 2, i] = phi[1, 0]
        A_l[i + 2, i + 2] = phi[1, 1]
        d0_free = (k2[i] / mass) * (bl[i] - offset[i]) + (b2[i] / mass) * vl[i]
        d1 = (k2[i] / mass) * vl[i]
        c_l[i] = g0[0] * d0_free + g1[0] * d1
        c_l[i + 2] = g0[1] * d0_free + g1[1] * d1
        if with_foot:
            B_l[i, i] = -omega2 * g0[0]
            B_l[i + 2, i] = -omega2 * g0[1]
    Rb = np.zeros((4, 4))
    Rb[:2, :2] = R
    Rb[2:, 2:] = R
    A = Rb @ A_l @ Rb.T
    c = Rb @ c_l
    B = Rb @ B_l @ R.T if with_foot else None
    return A, B, c


def damped_tracking_flow(kp, kd, duration):
    """Transition of the tracking error of e'' = -kp e - kd e'."""
    phi, _, _ = axis_flow(-kp, -kd, duration)
    return phi
