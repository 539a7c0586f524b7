"""Online adaptation of the forward coupling stiffness.

The forward-axis spring of the stepping model relaxes while the robot
trails its desired offset and tightens while it leads, which shifts the
burden of catching up onto the footstep pattern rather than the spring
force.  The gain is an adaptation variable, not a force estimate; it is
clamped to a safe range and updated every control tick on the local
separation error.
"""

from dataclasses import dataclass

import numpy as np

from .core import rotation_matrix


@dataclass
class ModulationGains:
    k_x1: float = 20.0    # stiffness decrement per meter of error
    b_x1: float = 5.0     # decrement per m/s of error rate
    K_min: float = 5.0
    K_max: float = 1000.0

    def __post_init__(self):
        if self.k_x1 < 0 or self.b_x1 < 0:
            raise ValueError("modulation gains must be non-negative")
        if not (0 < self.K_min <= self.K_max):
            raise ValueError("need 0 < K_min <= K_max")


def separation_error(robot, obj_pos, obj_vel, heading, params):
    """Forward-axis separation error and its rate in the stance frame."""
    R = rotation_matrix(heading)
    e = (R.T @ (np.asarray(obj_pos, dtype=float) - robot.pos)
         - params.offset)[0]
    ed = (R.T @ (np.asarray(obj_vel, dtype=float) - robot.vel))[0]
    return float(e), float(ed)


def update_stiffness(k_forward, robot, obj_pos, obj_vel, heading, params,
                     gains):
    """One adaptation tick of the forward coupling stiffness."""
    e, ed = separation_error(robot, obj_pos, obj_vel, heading, params)
    k = k_forward - gains.k_x1 * e - gains.b_x1 * ed
    return float(np.clip(k, gains.K_min, gains.K_max))
