"""Stability and collaboration-quality metrics.

Two post-processing tools: a capture point offset that folds a constant
external CoM force into the classic divergent-component argument, and a
sliding-window efficiency that compares net effort on the carried object
against the summed individual efforts of both partners.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .core import rotation_matrix


class EmptyWindow(ValueError):
    """Record too short to fit a single efficiency window."""


@dataclass
class EffortWindow:
    """Sliding integration window for the efficiency ratio."""
    width: float = 7.67     # s
    stride: float = 0.01534  # s

    def __post_init__(self):
        if not self.width > self.stride > 0:
            raise ValueError("need width > stride > 0")


@dataclass
class ForceSample:
    """One logged tick of hand forces and object velocity (world frame)."""
    t: float
    F_h: np.ndarray  # leader force on the object, N
    F_r: np.ndarray  # follower force on the object, N
    v_b: np.ndarray  # object velocity, m/s

    def __post_init__(self):
        self.F_h = np.asarray(self.F_h, dtype=float)
        self.F_r = np.asarray(self.F_r, dtype=float)
        self.v_b = np.asarray(self.v_b, dtype=float)


def modified_capture_point_offset(robot, foot, F_ext, m_robot, omega):
    """Capture point offset from the stance foot, in the stance frame.

    The CoM position is shifted by F_ext / (m w^2), the steady displacement
    a constant external force adds to the pendulum equilibrium, before the
    usual pos + vel/w construction.  F_ext is the equivalent force acting
    on the CoM (for us, the hand wrench on the robot).  Bounded offsets
    indicate the stepping pattern keeps the robot capturable.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    shifted = robot.pos + np.asarray(F_ext, dtype=float) / (m_robot * omega ** 2)
    xi = shifted + robot.vel / omega
    return rotation_matrix(foot.heading).T @ (xi - foot.pos)


_POWER_EPS = 1e-6


def _unpack(samples):
    t = np.array([s.t for s in samples], dtype=float)
    if t.size >= 2 and not np.all(np.diff(t) > 0):
        raise ValueError("samples must be strictly time-monotone")
    F_h = np.array([s.F_h for s in samples], dtype=float)
    F_r = np.array([s.F_r for s in samples], dtype=float)
    v_b = np.array([s.v_b for s in samples], dtype=float)
    return t, F_h, F_r, v_b


def efficiency(samples, window=None, headings=None):
    """Sliding-window collaboration efficiency over a force record.

    For each window the net effort integral(|(F_h + F_r) . v|) is divided
    by the summed individual efforts integral(|F_h . v| + |F_r . v|), with
    trapezoidal quadrature at the logging rate.  A window where nobody
    works (summed effort below 1e-6) counts as fully efficient.  With a
    headings array the dot products collapse to the stance-frame forward
    axis, the variant suited to straight-line records.

    Returns (times, etas) where times mark window ends.
    """
    window = window or EffortWindow()
    t, F_h, F_r, v_b = _unpack(samples)
    if t.size < 2 or t[-1] - t[0] < window.width:
        raise EmptyWindow("record shorter than one window")

    if headings is None:
        p_h = np.einsum("ij,ij->i", F_h, v_b)
        p_r = np.einsum("ij,ij->i", F_r, v_b)
    else:
        headings = np.asarray(headings, dtype=float)
        fwd = np.stack([np.cos(headings), np.sin(headings)], axis=1)
        p_h = np.einsum("ij,ij->i", F_h, fwd) * np.einsum("ij,ij->i", v_b, fwd)
        p_r = np.einsum("ij,ij->i", F_r, fwd) * np.einsum("ij,ij->i", v_b, fwd)

    net = cumulative_trapezoid(np.abs(p_h + p_r), t, initial=0.0)
    total = cumulative_trapezoid(np.abs(p_h) + np.abs(p_r), t, initial=0.0)

    starts = np.arange(t[0], t[-1] - window.width + 1e-12, window.stride)
    i0 = np.searchsorted(t, starts, side="left")
    i1 = np.searchsorted(t, starts + window.width, side="right") - 1
    e_n = net[i1] - net[i0]
    e_s = total[i1] - total[i0]
    with np.errstate(invalid="ignore", divide="ignore"):
        eta = np.where(e_s < _POWER_EPS, 1.0, e_n / np.maximum(e_s, _POWER_EPS))
    return starts + window.width, eta


def mean_efficiency(samples, window=None, headings=None):
    """Average of the sliding-window efficiency over the whole record."""
    _, eta = efficiency(samples, window, headings)
    return float(np.mean(eta))


def load_share_series(t, f_z_robot, f_z_human):
    """Fraction of the vertical load carried by the robot at each tick.

    Ticks where neither partner carries anything report an even 0.5.
    """
    t = np.asarray(t, dtype=float)
    fzr = np.asarray(f_z_robot, dtype=float)
    fzh = np.asarray(f_z_human, dtype=float)
    total = fzr + fzh
    with np.errstate(invalid="ignore", divide="ignore"):
        share = np.where(np.abs(total) > 1e-12, fzr / np.where(total == 0, 1.0, total), 0.5)
    return t, share
