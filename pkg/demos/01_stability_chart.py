"""
Resonance tongues of the Mathieu equation
=========================================

x'' + (k^2 + P cos(w t)) x = 0 is unstable in narrow tongues centred on
k = w/2, w, 3w/2, ... when the drive is weak, and for almost every k below w/2
when it is strong.
"""
import numpy as np

from floquet_noise import DriveSpec, compute_chart

omega = 2.0
template = DriveSpec(0.0, omega)   # amplitude is replaced by each P in the grid

ks = np.linspace(0.02, 3.0, 150)
Ps = [0.1 * omega**2, 0.5 * omega**2, 10 * omega**2]
rows = compute_chart(ks, Ps, template)

for P in Ps:
    mu = np.array([r.mu for r in rows if r.P == P])
    unstable = ks[mu > 0]
    print(f"P = {P:5.1f}: {unstable.size:3d} of {ks.size} modes unstable, max mu = {mu.max():.4f}")

# where exactly is the first tongue at weak drive?
weak = np.array([r.mu for r in rows if r.P == Ps[0]])
first = ks[(weak > 0) & (ks < 1.5)]
print(f"first tongue at P = {Ps[0]}: k in [{first.min():.3f}, {first.max():.3f}]  (w/2 = {omega / 2})")

try:
    import matplotlib.pyplot as plt
except ImportError:
    pass
else:
    P_fine = np.linspace(0.0, 2.0 * omega**2, 60)
    grid = compute_chart(ks, P_fine, template)
    mu = np.array([r.mu for r in grid]).reshape(len(P_fine), len(ks))
    plt.pcolormesh(ks, P_fine, mu, shading="auto")
    plt.xlabel("k")
    plt.ylabel("P")
    plt.colorbar(label="mu")
    plt.savefig("stability_chart.png", dpi=120)
    print("wrote stability_chart.png")
