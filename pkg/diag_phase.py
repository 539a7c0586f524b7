"""Demodulate case-1 stretch and hand force at the drive frequency."""
import numpy as np
from cotransport.scenarios import load_bundled
from cotransport.sim import Sim

scn = load_bundled("periodic")
scn.case = 1
sim = Sim(scn)
log = sim.run()

dt = sim.cfg.dt
T_drive = 2.81
w = 2 * np.pi / T_drive
t = log["t"]
tail = t > 10.0
tt = t[tail]

def demod(sig):
    s = sig[tail] - np.mean(sig[tail])
    z = np.exp(-1j * w * tt)
    # project on the drive phasor (rectangular window over whole cycles)
    ncyc = int((tt[-1] - tt[0]) / T_drive)
    span = tt < tt[0] + ncyc * T_drive
    return 2 * np.mean(s[span] * z[span])

box = demod(log["object_x"])
stretch_sig = log["object_x"] - log["robot_x"] - 0.6
stretch = demod(stretch_sig)
Fr_sig = -log["hand_fx"]
Fr = demod(Fr_sig)
v = demod(log["object_vx"])

print(f"box amp {abs(box):.4f}")
print(f"stretch: |.|={abs(stretch):.5f} ({abs(stretch)/abs(box)*100:.1f}% of box) "
      f"phase vs box {np.degrees(np.angle(stretch/box)):+.1f} deg")
print(f"F_r: |.|={abs(Fr):.2f} N, phase vs box {np.degrees(np.angle(Fr/box)):+.1f} deg"
      f" (pure spring pull would be 180)")
# velocity leads box by 90; fight component = part of Fr along -v
fight = np.real(Fr / v) * abs(v)
print(f"F_r component along v: {np.real(Fr/(v/abs(v))):+.2f} N")

# off-frequency content of F_r and stretch
for name, sig in (("F_r", Fr_sig), ("stretch", stretch_sig)):
    s = sig[tail] - np.mean(sig[tail])
    F = np.fft.rfft(s * np.hanning(s.size))
    freqs = np.fft.rfftfreq(s.size, dt)
    P = np.abs(F) ** 2
    b_drive = P[(freqs > 0.25) & (freqs < 0.5)].sum()
    b_mid = P[(freqs >= 0.5) & (freqs < 2.0)].sum()
    b_stride = P[(freqs >= 2.0) & (freqs < 4.0)].sum()
    b_hi = P[(freqs >= 4.0)].sum()
    tot = P[1:].sum()
    print(f"{name:8s} band energy: drive {b_drive/tot:.2%}  0.5-2Hz {b_mid/tot:.2%}"
          f"  2-4Hz {b_stride/tot:.2%}  >4Hz {b_hi/tot:.2%}")

# power bookkeeping
Fh = np.column_stack([log["leader_fx"], log["leader_fy"]])[tail]
Frv = np.column_stack([Fr_sig, -log["hand_fy"]])[tail]
vv = np.column_stack([log["object_vx"], log["object_vy"]])[tail]
pn = np.abs(np.einsum("ij,ij->i", Fh + Frv, vv))
ps = np.abs(np.einsum("ij,ij->i", Fh, vv)) + np.abs(np.einsum("ij,ij->i", Frv, vv))
print(f"eta over tail = {pn.mean()/ps.mean():.3f}")
print(f"mean |F_h.v|={np.abs(np.einsum('ij,ij->i', Fh, vv)).mean():.3f}  "
      f"mean |F_r.v|={np.abs(np.einsum('ij,ij->i', Frv, vv)).mean():.3f}  "
      f"mean |net.v|={pn.mean():.3f}")
