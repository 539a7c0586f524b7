"""Sweep stiffness-modulation gains on the troublesome scenarios."""
import numpy as np
from cotransport.scenarios import load_bundled
from cotransport.sim import Sim, summarize, separation_series
from cotransport.stiffness import ModulationGains

for eg, rg in [(0.0, 0.0), (0.2, 0.05), (0.5, 0.1), (1.0, 0.25), (2.0, 0.5)]:
    for name in ("inplace", "periodic"):
        scn = load_bundled(name)
        g = ModulationGains(error_gain=eg, rate_gain=rg)
        sim = Sim(scn, gains=g)
        fault = ""
        try:
            log = sim.run()
        except Exception as e:
            log = getattr(e, "partial_log", None)
            fault = f"FAULT@{getattr(e, 'tick', '?')}"
        if log is None or log.ticks == 0:
            print(f"gains=({eg},{rg}) {name:9s} {fault} no ticks")
            continue
        s = summarize(log, scn, sim.params, sim.cfg)
        sep = separation_series(log, sim.params)
        tail = sep[-5000:]
        print(f"gains=({eg},{rg}) {name:9s} {fault:10s} "
              f"settle={s['settle_time']!s:>7} eps_x={s['max_eps_x']:.3f} "
              f"tail_sep=[{tail.min():+.3f},{tail.max():+.3f}] "
              f"eta={s['mean_efficiency']!s:.8s} k_end={log['stiffness_x'][-1]:.0f}")
