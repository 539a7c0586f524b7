"""Deterministic fixed-step plant and scenario runner.

The plant integrates the planar object and the robot CoM at 1 kHz with
semi-implicit Euler.  The robot body accelerates as the whole-body
layer commands: a blend of yielding to the hand spring and tracking a
reference that is the goal-admittance flow integrated live against the
measured object.  The footstep plan projects that same flow into the
reachable foothold chain at every strike, so the feet shadow the path
the body is commanded along.  The arms act on the object through the
allocated hand wrench, which is where the hand-compliance gains enter.
Runs are bit-for-bit reproducible from (scenario, seed, config).
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .admittance import (admittance_accel, build_goal_set, desired_accels,
                         yaw_admittance_step)
from .core import (RIGHT, FootPose, GaitConfig, IntentEstimate, PlanarState,
                   compliance_case, lateral_sign, normalize_angle)
from .ilip import update_intent
from .metrics import (EffortWindow, EmptyWindow, ForceSample, efficiency,
                      modified_capture_point_offset)
from .mpc import MpcWeights, goal_step_matrices, solve_footstep_plan
from .qp import OPTIMAL
from .stiffness import ModulationGains, update_stiffness
from .wbc import (WbcParams, advance_phase, solve_interaction_qp,
                  swing_foot_position, vertical_load_share)

TICK_COLUMNS = [
    "t",
    "robot_x", "robot_y", "robot_vx", "robot_vy",
    "object_x", "object_y", "object_vx", "object_vy",
    "object_yaw", "object_yaw_rate",
    "stance_x", "stance_y", "stance_heading", "stance_side",
    "swing_x", "swing_y", "swing_z",
    "leader_fx", "leader_fy", "leader_mz",
    "hand_fx", "hand_fy", "hand_mz",
    "robot_fz", "leader_fz",
    "stiffness_x", "eps_x", "eps_y", "strike",
]


class SimFault(RuntimeError):
    """Controller failure inside the loop, tagged with the tick index."""

    def __init__(self, tick, message):
        super().__init__(f"tick {tick}: {message}")
        self.tick = tick
        self.reason = message


@dataclass
class SimLog:
    """Per-tick record plus footstep plan snapshots taken at strikes."""

    data: np.ndarray
    plans: list = field(default_factory=list)
    columns: tuple = tuple(TICK_COLUMNS)

    def __getitem__(self, name):
        return self.data[:, self.columns.index(name)]

    @property
    def ticks(self):
        return self.data.shape[0]

    def write_csv(self, path):
        np.savetxt(path, self.data, fmt="%.17g", delimiter=",",
                   header=",".join(self.columns), comments="")

    def force_record(self):
        """ForceSamples of both partners' planar forces on the object."""
        t = self["t"]
        F_h = self.data[:, [self.columns.index("leader_fx"),
                            self.columns.index("leader_fy")]]
        F_r = -self.data[:, [self.columns.index("hand_fx"),
                             self.columns.index("hand_fy")]]
        v_b = self.data[:, [self.columns.index("object_vx"),
                            self.columns.index("object_vy")]]
        return [ForceSample(t[i], F_h[i], F_r[i], v_b[i])
                for i in range(t.size)]


class Sim:
    """Closed-loop co-transport simulation for one scenario."""

    def __init__(self, scenario, gait=None, wbc=None, weights=None,
                 gains=None, load_fraction=0.55):
        self.scenario = scenario
        self.cfg = gait if gait is not None else GaitConfig()
        self.wbc = wbc if wbc is not None else WbcParams()
        self.weights = weights if weights is not None else MpcWeights()
        self.gains = gains if gains is not None else ModulationGains()
        self.load_fraction = float(load_fraction)
        self.reset()

    def reset(self):
        sc = self.scenario
        self.params = sc.make_params()
        self.reference = sc.make_reference()
        self.rng = np.random.default_rng(sc.seed)
        self.f_z_robot, self.f_z_human = vertical_load_share(
            self.params, self.cfg.gravity, self.load_fraction)

        self.robot = PlanarState(np.zeros(2), np.zeros(2))
        self.stance = FootPose(np.array([0.0, -self.cfg.lateral_clearance]),
                               heading=0.0, side=RIGHT)
        self.swing_start = np.array([0.0, self.cfg.lateral_clearance, 0.0])
        self.object = PlanarState(sc.object_start.copy(), np.zeros(2))
        self.object_yaw = sc.object_yaw
        self.object_yaw_rate = 0.0
        self.intent = IntentEstimate(np.zeros(2), sc.object_yaw)
        self.k_forward = float(self.params.k_couple[0])
        self.theta_rate = 0.0
        self.t_in_step = 0.0
        self.phase = 0.0
        self.tick_index = 0
        self.t = 0.0
        self.paused = False
        self.pending_case = None
        self._wbc_warm = None
        self._mpc_warm = None
        self.plan = None
        # reference the body is steered along: the goal-admittance flow,
        # integrated live and never reset, so it carries no strike
        # transients and no stride-periodic sway
        self._plan = PlanarState(self.robot.pos.copy(), np.zeros(2))
        self._replan()

    # -- planning

    def _replan(self):
        # the rollout continues the live flow state rather than starting
        # at the measured body: the body carries tracking residuals and
        # stride-periodic sway, and extrapolating either would let the
        # goals follow the body instead of the carried object
        seed = self._plan.copy()
        goals = build_goal_set(seed, self.stance.heading,
                               self.theta_rate, self.object.pos,
                               self.intent, self.params, self.cfg)
        plan, sol = solve_footstep_plan(seed, self.stance, goals,
                                        self.object.pos, self.intent.vel,
                                        self.params, self.weights, self.cfg,
                                        warm=self._mpc_warm,
                                        step_matrices=goal_step_matrices)
        if not plan.ok:
            raise SimFault(self.tick_index,
                           f"footstep planner returned {plan.status}")
        self._mpc_warm = sol
        self.plan = plan
        self.swing_target = plan.steps[0]
        # carry the yaw goal velocity so the rollout resumes where the
        # executed step will leave it
        self.theta_rate = yaw_admittance_step(
            self.stance.heading, self.theta_rate, self.intent.yaw,
            self.params, self.cfg)[1]

    def _apply_case(self, case):
        fresh = compliance_case(case)
        for name in ("k_goal", "b_goal", "k_hand", "b_hand", "m_plan"):
            setattr(self.params, name, getattr(fresh, name))
        self.scenario.case = case

    def request_case(self, case):
        """Queue a compliance-case switch for the next foot strike."""
        if case not in (1, 2, 3, 4):
            raise ValueError("case must be 1..4")
        self.pending_case = case

    # -- one control tick

    def tick(self, external=None):
        """Advance one dt.  Returns the log row for this tick.

        external, when given, is (force 2-vector, yaw moment) replacing
        the scripted leader; it is clamped to the leader's saturation.
        """
        cfg, params = self.cfg, self.params
        leader = self.scenario.leader
        if external is None:
            ref = self.reference.sample(self.t)
            F_h, M_h = leader.force(
                ref, self.object.pos, self.object.vel, self.object_yaw,
                self.object_yaw_rate,
                self.rng if leader.noise_std > 0 else None)
        else:
            F_h = np.asarray(external[0], dtype=float).reshape(2)
            norm = float(np.hypot(F_h[0], F_h[1]))
            if norm > leader.saturation:
                F_h = F_h * (leader.saturation / norm)
            M_h = float(np.clip(external[1], -leader.moment_saturation,
                                leader.moment_saturation))

        self.intent = update_intent(self.intent, self.object.vel,
                                    self.object_yaw)
        # the live flow damps toward the measured object velocity; the
        # smoothed intent estimate is for extrapolating over the horizon,
        # and its lag would feed the stiff hand spring a phase-shifted
        # reference error scaling with the object speed
        a_plan = admittance_accel(self._plan, self.object.pos,
                                  self.object.vel, self.stance.heading,
                                  params)
        des = desired_accels(self.robot, self.object, self.object_yaw,
                             self.object_yaw_rate, self.stance.heading,
                             F_h, params, plan_pos=self._plan.pos,
                             plan_vel=self._plan.vel, plan_acc=a_plan)
        out, wsol = solve_interaction_qp(des, F_h, M_h, params, self.wbc,
                                         warm=self._wbc_warm)
        if wsol.status != OPTIMAL:
            raise SimFault(self.tick_index,
                           f"interaction qp returned {wsol.status}")
        self._wbc_warm = wsol
        f_xy = out.wrench.f_xy
        m_z = out.wrench.m_z

        # plant: object driven by the two partners
        dt = cfg.dt
        a_obj = (F_h - f_xy) / params.m_object
        self.object.vel = self.object.vel + a_obj * dt
        self.object.pos = self.object.pos + self.object.vel * dt
        yaw_acc = (M_h - m_z) / self.wbc.yaw_inertia
        self.object_yaw_rate += yaw_acc * dt
        self.object_yaw = normalize_angle(self.object_yaw
                                          + self.object_yaw_rate * dt)

        # plant: the body point mass integrates the acceleration the
        # whole-body layer allocated for it (yield-to-hand plus tracking
        # of the stepped plan, clipped to the actuation bound)
        self.robot.vel = self.robot.vel + out.robot_acc * dt
        self.robot.pos = self.robot.pos + self.robot.vel * dt
        self._plan.vel = self._plan.vel + a_plan * dt
        self._plan.pos = self._plan.pos + self._plan.vel * dt

        self.k_forward = update_stiffness(
            self.k_forward, self.robot, self.object.pos, self.object.vel,
            self.stance.heading, params, self.gains)
        params.k_couple[0] = self.k_forward

        self.t_in_step, phase, strike = advance_phase(self.t_in_step, dt,
                                                      cfg)
        self.tick_index += 1
        self.t = self.tick_index * dt
        if strike:
            lifted = self.stance
            self.stance = self.swing_target
            self.swing_start = np.array([lifted.pos[0], lifted.pos[1], 0.0])
            if self.pending_case is not None:
                self._apply_case(self.pending_case)
                self.pending_case = None
            self._replan()
            phase = 0.0
        self.phase = phase

        swing = swing_foot_position(self.swing_start, self.swing_target.pos,
                                    phase, cfg)
        eps = modified_capture_point_offset(self.robot, self.stance, f_xy,
                                            params.m_robot, cfg.omega)
        return np.array([
            self.t,
            self.robot.pos[0], self.robot.pos[1],
            self.robot.vel[0], self.robot.vel[1],
            self.object.pos[0], self.object.pos[1],
            self.object.vel[0], self.object.vel[1],
            self.object_yaw, self.object_yaw_rate,
            self.stance.pos[0], self.stance.pos[1], self.stance.heading,
            float(lateral_sign(self.stance.side)),
            swing[0], swing[1], swing[2],
            F_h[0], F_h[1], M_h,
            f_xy[0], f_xy[1], m_z,
            self.f_z_robot, self.f_z_human,
            self.k_forward, eps[0], eps[1],
            1.0 if strike else 0.0,
        ])

    def plan_snapshot(self):
        steps = [{"x": float(s.pos[0]), "y": float(s.pos[1]),
                  "heading": float(s.heading), "side": s.side}
                 for s in self.plan.steps]
        com = [{"x": float(c.pos[0]), "y": float(c.pos[1]),
                "vx": float(c.vel[0]), "vy": float(c.vel[1])}
               for c in self.plan.com_pred]
        return {"tick": self.tick_index, "steps": steps, "com": com,
                "cost": self.plan.cost}

    def run(self):
        """Run the scripted scenario to completion; returns a SimLog.

        On a controller fault the partial log is attached to the raised
        SimFault as .partial_log.
        """
        n = int(round(self.scenario.duration / self.cfg.dt))
        data = np.zeros((n, len(TICK_COLUMNS)))
        plans = [self.plan_snapshot()]
        for i in range(n):
            try:
                data[i] = self.tick()
            except SimFault as fault:
                fault.partial_log = SimLog(data[:i].copy(), plans)
                raise
            if data[i, TICK_COLUMNS.index("strike")] == 1.0:
                plans.append(self.plan_snapshot())
        return SimLog(data, plans)


def separation_series(log, params):
    """Local forward object-robot separation at every tick."""
    dx = log["object_x"] - log["robot_x"]
    dy = log["object_y"] - log["robot_y"]
    c = np.cos(log["stance_heading"])
    s = np.sin(log["stance_heading"])
    return c * dx + s * dy


def settle_time(t, series, target, band):
    """First time after which |series - target| stays inside band."""
    ok = np.abs(series - target) < band
    if not ok[-1]:
        return None
    bad = np.nonzero(~ok)[0]
    if bad.size == 0:
        return float(t[0])
    return float(t[bad[-1] + 1])


def summarize(log, scenario, params, cfg, reference=None, window=None):
    """Post-run summary of the quantities the experiments report."""
    t = log["t"]
    sep = separation_series(log, params)
    target = float(params.offset[0])
    summary = {
        "name": scenario.name,
        "case": scenario.case,
        "seed": scenario.seed,
        "ticks": int(log.ticks),
        "duration": float(t[-1]) if log.ticks else 0.0,
        "final_separation": float(sep[-1]) if log.ticks else None,
        "settle_time": settle_time(t, sep, target, 0.05) if log.ticks
        else None,
        "max_eps_x": float(np.max(np.abs(log["eps_x"]))) if log.ticks
        else None,
        "max_eps_y": float(np.max(np.abs(log["eps_y"]))) if log.ticks
        else None,
        "strikes": int(np.sum(log["strike"])),
    }
    heading_err = np.abs(normalize_angle(log["stance_heading"]
                                         - log["object_yaw"]))
    after = t > 5.0
    summary["max_heading_error_after_5s"] = (
        float(np.max(heading_err[after])) if np.any(after) else None)

    if reference is not None and log.ticks:
        idx = np.arange(0, log.ticks, 10)
        err = np.zeros(idx.size)
        for j, i in enumerate(idx):
            ref_pos = reference.sample(t[i])[0]
            err[j] = np.hypot(log["object_x"][i] - ref_pos[0],
                              log["object_y"][i] - ref_pos[1])
        summary["path_rms_error"] = float(np.sqrt(np.mean(err ** 2)))

    try:
        times, eta = efficiency(log.force_record(), window)
        summary["mean_efficiency"] = float(np.mean(eta))
        summary["efficiency_windows"] = int(eta.size)
    except EmptyWindow:
        summary["mean_efficiency"] = None
        summary["efficiency_windows"] = 0
    return summary


def write_metrics_csv(path, log, window=None):
    """Window-aligned metric rows: t, eta, eps_x, eps_y, K_x_t, load share.

    Returns the number of rows written (0 when the record is shorter
    than the efficiency window; no file is produced then).
    """
    try:
        times, eta = efficiency(log.force_record(), window)
    except EmptyWindow:
        return 0
    t = log["t"]
    idx = np.minimum(np.searchsorted(t, times), t.size - 1)
    fzr = log["robot_fz"][idx]
    fzh = log["leader_fz"][idx]
    share = fzr / (fzr + fzh)
    rows = np.column_stack([times, eta, log["eps_x"][idx], log["eps_y"][idx],
                            log["stiffness_x"][idx], share])
    np.savetxt(path, rows, fmt="%.17g", delimiter=",",
               header="t,eta,eps_x,eps_y,K_x_t,load_share",
               comments="")
    return rows.shape[0]


def run_scenario(scenario, out_dir=None, case=None, seed=None, **sim_kw):
    """Run one scenario start to finish; optionally write the artifacts.

    Returns (log, summary).  Controller faults surface in the summary
    with the partial log preserved on disk when out_dir is given.
    """
    if case is not None:
        scenario.case = case
    if seed is not None:
        scenario.seed = seed
    sim = Sim(scenario, **sim_kw)
    fault = None
    try:
        log = sim.run()
    except SimFault as exc:
        fault = exc
        log = exc.partial_log
    summary = summarize(log, scenario, sim.params, sim.cfg,
                        reference=sim.reference)
    if fault is not None:
        summary["fault"] = {"tick": fault.tick, "reason": fault.reason}
    else:
        summary["fault"] = None

    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        base = os.path.join(out_dir, scenario.name)
        log.write_csv(base + "_ticks.csv")
        write_metrics_csv(base + "_metrics.csv", log)
        with open(base + "_plans.json", "w", encoding="utf-8") as fh:
            json.dump(log.plans, fh, indent=1)
        with open(base + "_summary.json", "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=1)
    if fault is not None:
        raise fault
    return log, summary
