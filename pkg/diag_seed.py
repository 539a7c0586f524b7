"""Test: does filtering the goal-rollout seed velocity kill the lateral pump?

Mode A: zero the local-lateral component of the seed velocity.
Mode B: 2T boxcar average of the world velocity, lateral component only.
"""
import numpy as np
from collections import deque

from cotransport.sim import Sim, SimFault
from cotransport.scenarios import load_bundled
from cotransport.admittance import build_goal_set, yaw_admittance_step
from cotransport.mpc import solve_footstep_plan
from cotransport.core import rotation_matrix
from cotransport.sim import summarize


class SeedSim(Sim):
    """Sim with a filtered goal-rollout seed velocity."""

    seed_mode = "zero"  # "zero" | "boxcar"

    def reset(self):
        super().reset()
        n = int(round(2 * self.cfg.step_duration / self.cfg.dt))
        self._vel_hist = deque([self.robot.vel.copy()] * n, maxlen=n)

    def tick(self, external=None):
        row = super().tick(external)
        self._vel_hist.append(self.robot.vel.copy())
        return row

    def _replan(self):
        R = rotation_matrix(self.stance.heading)
        v_loc = R.T @ self.robot.vel
        if self.seed_mode == "zero":
            v_loc[1] = 0.0
        else:
            avg = np.mean(np.asarray(self._vel_hist), axis=0)
            v_loc[1] = (R.T @ avg)[1]
        seed = self.robot.copy()
        seed.vel = R @ v_loc
        goals = build_goal_set(seed, self.stance.heading, self.theta_rate,
                               self.object.pos, self.intent, self.params,
                               self.cfg)
        plan, sol = solve_footstep_plan(self.robot, self.stance, goals,
                                        self.object.pos, self.intent.vel,
                                        self.params, self.weights, self.cfg,
                                        warm=self._mpc_warm)
        if not plan.ok:
            raise SimFault(self.tick_index,
                           f"footstep planner returned {plan.status}")
        self._mpc_warm = sol
        self.plan = plan
        self.swing_target = plan.steps[0]
        self._step_params = self.params.copy()
        self._step_obj = self.object.pos.copy()
        self._step_intent = self.intent.vel.copy()
        self.theta_rate = yaw_admittance_step(
            self.stance.heading, self.theta_rate, self.intent.yaw,
            self.params, self.cfg)[1]


def run_one(name, case, mode):
    sc = load_bundled(name)
    sc.case = case
    sim = SeedSim(sc)
    sim.seed_mode = mode
    try:
        log = sim.run()
        s = summarize(log, sc, sim.params, sim.cfg, reference=sim.reference)
        st = s.get("settle_time")
        st = f"{st:6.2f}" if st is not None else "  None"
        print(f"  {name:14s} c{case} {mode:6s}: OK  settle={st} "
              f"eps=({s['max_eps_x']:.3f},{s['max_eps_y']:.3f}) "
              f"eta={s['mean_efficiency']:.3f}")
    except SimFault as e:
        print(f"  {name:14s} c{case} {mode:6s}: FAULT@{e.tick}")


if __name__ == "__main__":
    for mode in ("zero", "boxcar"):
        print(f"--- seed mode: {mode}")
        for case in (1, 2, 3, 4):
            run_one("inplace", case, mode)
