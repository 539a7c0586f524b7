"""Dump MPC goals vs planned steps vs measured state at the worst strikes."""
import numpy as np

from cotransport.scenarios import bundled_suite
from cotransport.sim import Sim

suite = {s.name: s for s in bundled_suite()}


class Probe(Sim):
    def __init__(self, scn, t_lo, t_hi):
        super().__init__(scn)
        self.t_lo, self.t_hi = t_lo, t_hi

    def _replan(self):
        super()._replan()
        t = self.tick_index * self.cfg.dt
        if self.t_lo <= t <= self.t_hi:
            om = np.sqrt(9.81 / 0.9)
            xi = self.robot.pos + self.robot.vel / om
            gs = " ".join(f"({g.pos[0]:+.2f},{g.pos[1]:+.2f})"
                          for g in self.plan_goals)
            st = " ".join(f"({s.pos[0]:+.2f},{s.pos[1]:+.2f})"
                          for s in self.plan.steps)
            pc = " ".join(f"({c.pos[0]:+.2f},{c.pos[1]:+.2f})"
                          for c in self.plan.com_pred)
            print(f"t={t:5.2f} body=({self.robot.pos[0]:+.3f},{self.robot.pos[1]:+.3f})"
                  f" v=({self.robot.vel[0]:+.2f},{self.robot.vel[1]:+.2f})"
                  f" xi=({xi[0]:+.3f},{xi[1]:+.3f}) obj=({self.object.pos[0]:+.3f},{self.object.pos[1]:+.3f})")
            print(f"        goals {gs}")
            print(f"        steps {st}")
            print(f"        pcom  {pc}")


# stash goals on the instance for printing
import cotransport.sim as simmod
_orig = simmod.build_goal_set


def spy(robot, heading, heading_rate, obj_pos, intent, params, cfg):
    gs = _orig(robot, heading, heading_rate, obj_pos, intent, params, cfg)
    Probe._last_goals = gs
    return gs


simmod.build_goal_set = spy


class Probe2(Probe):
    def __init__(self, scn, t_lo, t_hi):
        self.t_lo, self.t_hi = t_lo, t_hi
        Sim.__init__(self, scn)

    def _replan(self):
        Sim._replan(self)
        self.plan_goals = Probe._last_goals.com_goals
        t = self.tick_index * self.cfg.dt
        if self.t_lo <= t <= self.t_hi:
            om = np.sqrt(9.81 / 0.9)
            xi = self.robot.pos + self.robot.vel / om
            try:
                gs = " ".join(f"({g.pos[0]:+.2f},{g.pos[1]:+.2f})"
                              for g in self.plan_goals)
            except AttributeError:
                gs = str(self.plan_goals)[:120]
            st = " ".join(f"({s.pos[0]:+.2f},{s.pos[1]:+.2f})"
                          for s in self.plan.steps)
            pc = " ".join(f"({c.pos[0]:+.2f},{c.pos[1]:+.2f})"
                          for c in self.plan.com_pred)
            print(f"t={t:5.2f} body=({self.robot.pos[0]:+.3f},{self.robot.pos[1]:+.3f})"
                  f" v=({self.robot.vel[0]:+.2f},{self.robot.vel[1]:+.2f})"
                  f" xi=({xi[0]:+.3f},{xi[1]:+.3f}) obj=({self.object.pos[0]:+.3f},{self.object.pos[1]:+.3f})")
            print(f"  goals {gs}")
            print(f"  steps {st}")
            print(f"  pcom  {pc}")


print("=== straight_fast strikes around t=6")
p = Probe2(suite["straight_fast"], 4.8, 6.6)
p.run()
print("=== lateral_square strikes around t=8.8")
p = Probe2(suite["lateral_square"], 8.0, 9.3)
p.run()
