"""Sweep MPC anchor weight; check damping vs cruise-bias tension."""
import numpy as np
from cotransport.scenarios import load_bundled
from cotransport.sim import Sim, summarize, separation_series
from cotransport.mpc import MpcWeights

for wa in (0.3, 1.0, 3.0, 10.0):
    for name in ("inplace", "periodic", "straight_fast"):
        scn = load_bundled(name)
        sim = Sim(scn, weights=MpcWeights(w_anchor=wa))
        fault = ""
        try:
            log = sim.run()
        except Exception as e:
            log = getattr(e, "partial_log", None)
            fault = f"FAULT@{getattr(e, 'tick', '?')}"
        if log is None or log.ticks == 0:
            print(f"wa={wa:5.1f} {name:13s} {fault} no ticks")
            continue
        s = summarize(log, scn, sim.params, sim.cfg)
        sep = separation_series(log, sim.params)
        tail = sep[-5000:]
        print(f"wa={wa:5.1f} {name:13s} {fault:10s} "
              f"settle={s['settle_time']!s:>7.7s} "
              f"eps=({s['max_eps_x']:.3f},{s['max_eps_y']:.3f}) "
              f"tail_sep=[{tail.min():+.3f},{tail.max():+.3f}] "
              f"eta={s['mean_efficiency']!s:.6s}")
