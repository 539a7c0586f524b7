"""Dump eps decomposition and hand-force phase structure for offenders."""
import numpy as np

from cotransport.core import ComplianceParams, GaitConfig
from cotransport.scenarios import bundled_suite
from cotransport.sim import Sim

suite = {s.name: s for s in bundled_suite()}


def probe(name):
    scn = suite[name]
    sim = Sim(scn)
    log = sim.run()
    t = log["t"]
    ex, ey = log["eps_x"], log["eps_y"]
    ix = int(np.argmax(np.abs(ex)))
    iy = int(np.argmax(np.abs(ey)))
    print(f"== {name}: max|eps_x|={abs(ex[ix]):.3f} @t={t[ix]:.2f}  "
          f"max|eps_y|={abs(ey[iy]):.3f} @t={t[iy]:.2f}")
    p = sim.params
    mc_w2 = p.m_robot * (9.81 / 0.9)
    for lbl, i in (("x-peak", ix), ("y-peak", iy)):
        om = np.sqrt(9.81 / 0.9)
        row = {c: log[c][i] for c in ("robot_x", "robot_y", "robot_vx",
                                      "robot_vy", "stance_x", "stance_y",
                                      "hand_fx", "hand_fy", "strike")}
        gx = row["robot_x"] + row["hand_fx"] / mc_w2
        xi_x = gx + row["robot_vx"] / om
        gy = row["robot_y"] + row["hand_fy"] / mc_w2
        xi_y = gy + row["robot_vy"] / om
        print(f"  {lbl} t={t[i]:6.2f} body=({row['robot_x']:+.3f},{row['robot_y']:+.3f}) "
              f"v=({row['robot_vx']:+.3f},{row['robot_vy']:+.3f}) "
              f"u=({row['stance_x']:+.3f},{row['stance_y']:+.3f}) "
              f"f=({row['hand_fx']:+6.1f},{row['hand_fy']:+6.1f}) "
              f"xi=({xi_x:+.3f},{xi_y:+.3f}) fshift=({row['hand_fx']/mc_w2:+.3f},{row['hand_fy']/mc_w2:+.3f})")
    # eps at strike ticks vs global
    sm = log["strike"] > 0.5
    if sm.any():
        print(f"  at strikes: max|eps_x|={np.max(np.abs(ex[sm])):.3f} "
              f"max|eps_y|={np.max(np.abs(ey[sm])):.3f}   "
              f"(global {np.max(np.abs(ex)):.3f},{np.max(np.abs(ey)):.3f})")
    return sim, log


for n in ("straight_fast", "lateral_square", "periodic-case1"):
    probe(n)

# fight structure in case1: correlate F_r . v with drive vs stride frequency
scn = suite["periodic-case1"]
sim = Sim(scn)
log = sim.run()
t = log["t"]
vx, vy = log["object_vx"], log["object_vy"]
fr = np.column_stack([-log["hand_fx"], -log["hand_fy"]])  # force on object
fh = np.column_stack([log["leader_fx"], log["leader_fy"]])
v = np.column_stack([vx, vy])
pr = (fr * v).sum(axis=1)
ph = (fh * v).sum(axis=1)
sel = t > 10.0
print("case1 powers (t>10): robot mean %.3f rms %.3f | leader mean %.3f rms %.3f"
      % (pr[sel].mean(), np.sqrt((pr[sel] ** 2).mean()),
         ph[sel].mean(), np.sqrt((ph[sel] ** 2).mean())))
# rough spectrum of robot power: energy near drive (0.25 Hz) vs stride (2.5 Hz)
x = pr[sel] - pr[sel].mean()
freqs = np.fft.rfftfreq(x.size, d=0.001)
mag = np.abs(np.fft.rfft(x))
for f0 in (0.25, 0.5, 2.5, 5.0):
    band = (freqs > f0 * 0.8) & (freqs < f0 * 1.2)
    print(f"  power band ~{f0:4.2f} Hz: {mag[band].sum():10.1f}")
ebody = np.hypot(log["object_x"] - log["robot_x"] - 0.6 * np.cos(0),
                 log["object_y"] - log["robot_y"])
print("case1 rel-error |obj-body-off|: mean %.4f max %.4f (t>10)"
      % (ebody[sel].mean(), ebody[sel].max()))
