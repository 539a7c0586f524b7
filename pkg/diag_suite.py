"""Run the full bundled suite and print one summary line per run."""
import numpy as np
from cotransport.scenarios import bundled_suite
from cotransport.sim import Sim, summarize


def fmt(v, spec="+.3f"):
    return "None" if v is None else format(v, spec)


def main():
    for scn in bundled_suite():
        sim = Sim(scn)
        fault = ""
        try:
            log = sim.run()
        except Exception as e:
            log = getattr(e, "partial_log", None)
            fault = f"FAULT({e})"
        if log is None or log.ticks == 0:
            print(f"{scn.name:22s} {fault} (no ticks)")
            continue
        s = summarize(log, scn, sim.params, sim.cfg, reference=sim.reference)
        yaw_end = log["object_yaw"][-1]
        print(f"{scn.name:22s} {fault:44.44s} settle={fmt(s['settle_time'], '6.2f')} "
              f"sep={fmt(s['final_separation'])} "
              f"eps=({fmt(s['max_eps_x'], '.3f')},{fmt(s['max_eps_y'], '.3f')}) "
              f"yaw_end={yaw_end:+.3f} hdg={fmt(s['max_heading_error_after_5s'], '.3f')} "
              f"rms={fmt(s.get('path_rms_error'), '.3f')} "
              f"eta={fmt(s['mean_efficiency'], '.3f')} "
              f"strikes={s['strikes']}")


if __name__ == "__main__":
    main()
