"""Periodic-case eta quartet plus eps/fault health."""
import numpy as np
from cotransport.scenarios import load_bundled
from cotransport.sim import Sim, summarize

etas = {}
for case in (1, 2, 3, 4):
    scn = load_bundled("periodic")
    scn.case = case
    sim = Sim(scn)
    fault = ""
    try:
        log = sim.run()
    except Exception as e:
        log = getattr(e, "partial_log", None)
        fault = f"FAULT@{getattr(e, 'tick', '?')}"
    if log is None or log.ticks == 0:
        print(f"periodic case{case} {fault} no ticks")
        continue
    s = summarize(log, scn, sim.params, sim.cfg)
    etas[case] = s["mean_efficiency"]
    ox = log["object_x"]
    tail = slice(-15000, None)
    print(f"case{case} {fault:10s} eta={s['mean_efficiency']:.3f} "
          f"eps=({s['max_eps_x']:.3f},{s['max_eps_y']:.3f}) "
          f"obj_x_tail=[{ox[tail].min():+.3f},{ox[tail].max():+.3f}] "
          f"strikes={s['strikes']}")
if len(etas) == 4:
    c = etas
    print(f"\nmargins: c1-c2={c[1]-c[2]:+.3f} c3-c2={c[3]-c[2]:+.3f} "
          f"c1-c4={c[1]-c[4]:+.3f} c3-c4={c[3]-c[4]:+.3f} "
          f"|c1-c3|={abs(c[1]-c[3]):.3f}")
