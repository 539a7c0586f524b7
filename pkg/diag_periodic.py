"""Periodic drive: all four compliance cases, amplitude/period variants."""
import numpy as np
from cotransport.scenarios import load_bundled
from cotransport.sim import Sim, summarize

for amp, per in ((0.25, 3.0), (0.2, 3.0), (0.2, 3.5)):
    etas = {}
    for case in (1, 2, 3, 4):
        scn = load_bundled("periodic")
        scn.case = case
        scn.model_args = dict(scn.model_args, amplitude=amp, period=per)
        sim = Sim(scn)
        fault = ""
        try:
            log = sim.run()
        except Exception as e:
            log = getattr(e, "partial_log", None)
            fault = f"FAULT@{getattr(e, 'tick', '?')}"
        if log is None or log.ticks == 0:
            print(f"amp={amp} per={per} case{case} {fault} no ticks")
            continue
        s = summarize(log, scn, sim.params, sim.cfg)
        etas[case] = s["mean_efficiency"]
        print(f"amp={amp} per={per} case{case} {fault:12s} "
              f"eps=({s['max_eps_x']:.3f},{s['max_eps_y']:.3f}) "
              f"eta={s['mean_efficiency']!s:.6s}")
    if len(etas) == 4 and all(v is not None for v in etas.values()):
        e = etas
        print(f"  ordering: 1>2 {e[1]-e[2]:+.3f}  3>2 {e[3]-e[2]:+.3f}  "
              f"1>4 {e[1]-e[4]:+.3f}  3>4 {e[3]-e[4]:+.3f}  |1-3| {abs(e[1]-e[3]):.3f}")
