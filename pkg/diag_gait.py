"""Strike-by-strike gait diagnostics for tuning."""
import numpy as np
from cotransport.scenarios import load_bundled
from cotransport.sim import Sim

np.set_printoptions(precision=3, suppress=True)


def diagnose(name, case=None, tmax=None):
    scn = load_bundled(name)
    if case is not None:
        scn.case = case
    sim = Sim(scn)
    log = None
    try:
        log = sim.run()
    except Exception as e:
        log = getattr(e, "partial_log", None)
        print(f"{name}: FAULT {e}")
    if log is None:
        return
    t = log["t"]
    n = len(t)
    strike = log["strike"].astype(bool)
    eps_x, eps_y = log["eps_x"], log["eps_y"]
    cx, cy = log["robot_x"], log["robot_y"]
    vx = log["robot_vx"]
    ox = log["object_x"]
    sx, sy, hd = log["stance_x"], log["stance_y"], log["stance_heading"]
    k = log["stiffness_x"]
    hfx = log["hand_fx"]
    imax = int(np.argmax(np.abs(eps_x)))
    print(f"== {name} n={n} max|eps_x|={abs(eps_x[imax]):.3f} @t={t[imax]:.2f} "
          f"max|eps_y|={np.max(np.abs(eps_y)):.3f}")
    # components at the argmax tick
    ch, sh = np.cos(hd[imax]), np.sin(hd[imax])
    rel = ch * (cx[imax] - sx[imax]) + sh * (cy[imax] - sy[imax])
    vloc = ch * log["robot_vx"][imax] + sh * log["robot_vy"][imax]
    floc = ch * (-hfx[imax]) + sh * (-log["hand_fy"][imax])
    print(f"   at argmax: (com-u)_fwd={rel:+.3f} v/w={vloc/3.3015:+.3f} "
          f"F/(mw2)={floc/(45*3.3015**2):+.4f}")
    idx = np.flatnonzero(strike)
    rows = []
    for j, i in enumerate(idx):
        if tmax and t[i] > tmax:
            break
        ch, sh = np.cos(hd[i]), np.sin(hd[i])
        rel = ch * (cx[i] - sx[i]) + sh * (cy[i] - sy[i])
        sep = ch * (ox[i] - cx[i]) + sh * (log["object_y"][i] - cy[i])
        lo = idx[j - 1] if j else 0
        emax = np.max(np.abs(eps_x[lo:i + 1]))
        rows.append((t[i], rel, sep, vx[i], k[i], emax, -hfx[i]))
    step = max(1, len(rows) // 40)
    print("   t     com-u_fwd  sep    vx     k     step_max|eps_x|  Fr_x")
    for r in rows[::step]:
        print(f"   {r[0]:5.2f}  {r[1]:+.3f}   {r[2]:+.3f} {r[3]:+.3f} "
              f"{r[4]:6.1f}  {r[5]:.3f}         {r[6]:+.1f}")


if __name__ == "__main__":
    import sys
    names = sys.argv[1:] or ["inplace", "straight_fast"]
    for nm in names:
        diagnose(nm)
        print()
