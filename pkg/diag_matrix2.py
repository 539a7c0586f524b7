"""Anchor-weight matrix WITH boxcar seed filtering, on the critical four."""
import numpy as np

from cotransport.sim import SimFault, summarize
from cotransport.scenarios import load_bundled
from cotransport.mpc import MpcWeights
from diag_seed import SeedSim

PROBES = [("inplace", 2), ("inplace", 4), ("straight_fast", 3),
          ("lateral_square", 1)]


def run(name, case, qa_y, qg_y):
    sc = load_bundled(name)
    sc.case = case
    sim = SeedSim(sc, weights=MpcWeights(q_goal=[10.0, qg_y],
                                         q_anchor=[1.0, qa_y]))
    sim.seed_mode = "boxcar"
    try:
        log = sim.run()
        s = summarize(log, sc, sim.params, sim.cfg, reference=sim.reference)
        return (f"OK eps=({s['max_eps_x']:.2f},{s['max_eps_y']:.2f}) "
                f"eta={s['mean_efficiency']:.2f}")
    except SimFault as e:
        return f"FAULT@{e.tick}"


for qg_y in (10.0, 5.0):
    for qa_y in (1.0, 2.0, 3.0):
        print(f"q_goal_y={qg_y:4.1f} q_anchor_y={qa_y:3.1f}:")
        for name, case in PROBES:
            print(f"   {name:14s} c{case}: {run(name, case, qa_y, qg_y)}")
