"""Per-strike lateral trace for the compliant-goal pump (case 2)."""
import numpy as np

from cotransport.sim import SimFault
from cotransport.scenarios import load_bundled
from diag_seed import SeedSim

sc = load_bundled("inplace")
sc.case = 2
sim = SeedSim(sc)
sim.seed_mode = "boxcar"

rows = []
orig_replan = SeedSim._replan

def traced(self):
    orig_replan(self)
    g = [s.pos[1] for s in self.plan.goals.com_goals] if hasattr(self.plan, "goals") else []
    rows.append((self.tick_index * self.cfg.dt,
                 self.robot.pos[1], self.robot.vel[1],
                 self.stance.pos[1], self.swing_target.pos[1]))

SeedSim._replan = traced
try:
    sim.run()
    print("no fault")
except SimFault as e:
    print(f"FAULT@{e.tick}")

print(f"{'t':>6} {'y':>7} {'vy':>7} {'u_y':>7} {'u_next_y':>8}")
for t, y, vy, uy, un in rows[::4]:
    print(f"{t:6.2f} {y:7.3f} {vy:7.3f} {uy:7.3f} {un:8.3f}")
print("last 12 strikes:")
for t, y, vy, uy, un in rows[-12:]:
    print(f"{t:6.2f} {y:7.3f} {vy:7.3f} {uy:7.3f} {un:8.3f}")
