"""Footstep planning as a convex program over the stepping horizon.

Decision variables stack, per planned step, the end-of-step CoM state
and the foothold that lands at that step's end.  The first interval is
ballistic: it rides the foot already on the ground when the plan is
made, so the earliest a decision can act is the next touchdown, exactly
as executed.  Equality rows are the exact affine step maps of the
coupled pendulum model (headings held constant per stage, which keeps
the program convex); inequality rows chain the reachable foothold
region from foot to foot.  The cost pulls each end-of-step CoM to its
rollout goal and regularizes the distance between each touchdown CoM
and the foot landing there, both weighted in the stance frame of the
stage.
"""

from dataclasses import dataclass

import numpy as np

from .admittance import admittance_step_matrices
from .core import (FootPose, PlanarState, lateral_sign, other_side,
                   rotation_matrix)
from .ilip import ilip_step_matrices
from .qp import OPTIMAL, QpProblem, solve


@dataclass
class MpcWeights:
    """Stage weights: goal tracking (K_phi) and CoM-foot anchoring (B_phi).

    phi1 and phi2 scale the two terms.  With the flow-map stage dynamics the
    anchor term is the only part of the cost the footholds enter, so phi2
    sets scale only; under pendulum dynamics it trades off against phi1.
    """

    K_phi: np.ndarray = None
    B_phi: np.ndarray = None
    phi1: float = 1.0
    phi2: float = 0.3

    def __post_init__(self):
        self.K_phi = (np.array([10.0, 10.0]) if self.K_phi is None
                      else np.asarray(self.K_phi, dtype=float).reshape(2))
        self.B_phi = (np.array([1.0, 1.0]) if self.B_phi is None
                      else np.asarray(self.B_phi, dtype=float).reshape(2))
        if self.phi1 < 0 or self.phi2 < 0 or np.any(self.K_phi < 0) \
                or np.any(self.B_phi < 0):
            raise ValueError("weights must be nonnegative")


@dataclass
class FootPlan:
    """Planned footholds with the predicted CoM trajectory."""

    steps: list
    com_pred: list
    cost: float
    status: str
    iterations: int = 0

    @property
    def ok(self):
        return self.status == OPTIMAL


def feasible_region(prev, cfg):
    """Reachable region of the next foothold relative to foot `prev`.

    Returns (A, lower, upper) with two two-sided rows acting on the
    world-frame displacement u_next - prev.pos: the first bounds the
    displacement along the stance forward axis symmetrically, the second
    keeps the lateral displacement toward the swing side between the
    crossing clearance and the outer reach.
    """
    c, s = np.cos(prev.heading), np.sin(prev.heading)
    n = lateral_sign(prev.side)
    A = np.array([[c, s], [-n * s, n * c]])
    lower = np.array([-cfg.forward_reach, cfg.lateral_clearance])
    upper = np.array([cfg.forward_reach, cfg.lateral_reach])
    return A, lower, upper


def _stage_headings(stance, goals):
    """Heading of the stance foot active during each stage."""
    n = len(goals.headings)
    return [stance.heading if i == 0 else goals.headings[i - 1]
            for i in range(n)]


def goal_step_matrices(heading, obj_pos, intent_vel, params, cfg):
    """Stage maps of the goal-admittance flow, no foot coupling.

    Drop-in alternative to the coupled pendulum maps for the equality
    rows.  The predicted CoM then rides the same dynamics that produced
    the rollout goals, so the plan reduces to projecting that path into
    the reachable foothold chain: feet shadow the motion the body is
    actually commanded to follow instead of a pendulum the carried body
    never exhibits, whose divergent prediction flips the plan from one
    strike parity to the other.
    """
    A, c = admittance_step_matrices(heading, obj_pos, intent_vel, params,
                                    cfg)
    return A, np.zeros((4, 2)), c


def assemble_mpc(robot, stance, goals, obj_pos, intent_vel, params,
                 weights, cfg, step_matrices=ilip_step_matrices):
    """Build the horizon QP.  Returns (problem, stage step matrices)."""
    N = len(goals.headings)
    n = 6 * N
    H = np.zeros((n, n))
    f = np.zeros(n)
    A_eq = np.zeros((4 * N, n))
    b_eq = np.zeros(4 * N)
    A_in = np.zeros((2 * N, n))
    lower = np.zeros(2 * N)
    upper = np.zeros(2 * N)

    obj_pos = np.asarray(obj_pos, dtype=float)
    intent_vel = np.asarray(intent_vel, dtype=float)
    headings = _stage_headings(stance, goals)
    x0 = robot.as_vector()
    stages = []
    side = stance.side
    for i in range(N):
        o = 6 * i
        obj_i = obj_pos + intent_vel * (cfg.step_duration * i)
        Ai, Bi, ci = step_matrices(headings[i], obj_i, intent_vel,
                                   params, cfg)
        stages.append((Ai, Bi, ci))
        # dynamics: X_{i+1} = A X_i + B u_i + c; u_i is the foot on the
        # ground while the interval runs, placed at the strike that
        # starts it (replanning re-decides the landing as it happens)
        r = 4 * i
        A_eq[r:r + 4, o:o + 4] = np.eye(4)
        A_eq[r:r + 4, o + 4:o + 6] = -Bi
        if i == 0:
            b_eq[r:r + 4] = Ai @ x0 + ci
        else:
            A_eq[r:r + 4, o - 6:o - 2] = -Ai
            b_eq[r:r + 4] = ci

        # cost, in the stance frame active during the stage
        R = rotation_matrix(headings[i])
        W1 = 2.0 * weights.phi1 * (R @ np.diag(weights.K_phi) @ R.T)
        W2 = 2.0 * weights.phi2 * (R @ np.diag(weights.B_phi) @ R.T)
        po = slice(o, o + 2)
        uo = slice(o + 4, o + 6)
        H[po, po] += W1 + W2
        H[uo, uo] += W2
        H[po, uo] -= W2
        H[uo, po] -= W2
        f[po] -= W1 @ goals.com_goals[i].pos

        # reachable region relative to the previous foothold
        prev = FootPose(stance.pos, headings[i], side)
        Ar, lo, hi = feasible_region(prev, cfg)
        q = 2 * i
        A_in[q:q + 2, uo] = Ar
        if i == 0:
            lower[q:q + 2] = lo + Ar @ stance.pos
            upper[q:q + 2] = hi + Ar @ stance.pos
        else:
            A_in[q:q + 2, o - 2:o] = -Ar
            lower[q:q + 2] = lo
            upper[q:q + 2] = hi
        side = other_side(side)

    return QpProblem(H, f, A_eq, b_eq, A_in, lower, upper), stages


def solve_footstep_plan(robot, stance, goals, obj_pos, intent_vel, params,
                        weights, cfg, warm=None,
                        step_matrices=ilip_step_matrices):
    """Plan the next footholds; returns (FootPlan, QpSolution).

    The qp solution is returned for warm starting the next replan.
    """
    problem, _ = assemble_mpc(robot, stance, goals, obj_pos, intent_vel,
                              params, weights, cfg,
                              step_matrices=step_matrices)
    sol = solve(problem, warm=warm)
    N = len(goals.headings)
    steps = []
    com_pred = []
    side = stance.side
    for i in range(N):
        o = 6 * i
        side = other_side(side)
        steps.append(FootPose(sol.x[o + 4:o + 6].copy(),
                              heading=float(goals.headings[i]), side=side))
        com_pred.append(PlanarState(sol.x[o:o + 2].copy(),
                                    sol.x[o + 2:o + 4].copy()))
    cost = float(0.5 * sol.x @ problem.H @ sol.x + problem.f @ sol.x)
    plan = FootPlan(steps, com_pred, cost, sol.status, sol.iterations)
    return plan, sol
