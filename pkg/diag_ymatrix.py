"""Weight-matrix test for the lateral goal-chase pump."""
import numpy as np
from cotransport.scenarios import load_bundled
from cotransport.sim import Sim, summarize
from cotransport.mpc import MpcWeights

variants = {
    "A qg(10,10) qa(1,1)": MpcWeights(),
    "B qg(10,3)  qa(1,1)": MpcWeights(q_goal=[10, 3]),
    "C qg(10,3)  qa(1,3)": MpcWeights(q_goal=[10, 3], q_anchor=[1, 3]),
    "D qg(10,10) qa(1,3)": MpcWeights(q_anchor=[1, 3]),
}
for label, w in variants.items():
    for name, case in (("inplace", 2), ("inplace", 4), ("lateral_square", 1),
                       ("straight_fast", 3)):
        scn = load_bundled(name)
        scn.case = case
        sim = Sim(scn, weights=w)
        fault = ""
        try:
            log = sim.run()
        except Exception as e:
            log = getattr(e, "partial_log", None)
            fault = f"FAULT@{getattr(e, 'tick', '?')}"
        if log is None or log.ticks == 0:
            print(f"{label} {name:14s}c{case} {fault} no ticks")
            continue
        s = summarize(log, scn, sim.params, sim.cfg,
                      reference=sim.reference)
        print(f"{label} {name:14s}c{case} {fault:12.12s} "
              f"eps=({s['max_eps_x']:.3f},{s['max_eps_y']:.3f}) "
              f"rms={s.get('path_rms_error', -1):.3f} "
              f"eta={s['mean_efficiency']!s:.6s}")
    print()
