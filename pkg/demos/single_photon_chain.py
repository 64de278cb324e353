"""One-photon transport through long chains, three quick observations.

The scattering solve is a tridiagonal linear system, so hundreds of
atoms cost nothing.
"""

import numpy as np

from chainlight import MediumSpec, single_photon

# 1. matched boundaries pass resonant light perfectly at any length
print("matched (2Jx = Gamma): resonant |t_N|^2")
for n in (2, 10, 50, 200):
    med = MediumSpec(n=n, jx=0.05, jz=0.0, gamma_l=0.1, gamma_r=0.1)
    print(f"  N={n:4d}: {abs(single_photon(med, 1.0).t) ** 2:.12f}")

# 2. mismatched boundaries set up an undamped oscillation in N
print("mismatched (Jx=0.03, Gamma=0.1): resonant |t_N|^2 oscillates")
vals = []
for n in range(2, 22):
    med = MediumSpec(n=n, jx=0.03, jz=0.0, gamma_l=0.1, gamma_r=0.1)
    vals.append(abs(single_photon(med, 1.0).t) ** 2)
print("  " + " ".join(f"{v:.3f}" for v in vals))
print(f"  range [{min(vals):.3f}, {max(vals):.3f}], no decay with N")

# 3. peaks fill the band omega_a +- 4Jx as N grows
med = MediumSpec(n=30, jx=0.05, jz=0.0, gamma_l=0.1, gamma_r=0.1)
grid = np.linspace(0.78, 1.22, 2001)
t2 = np.array([abs(single_photon(med, float(w)).t) ** 2 for w in grid])
peaks = [grid[k] for k in range(1, len(grid) - 1)
         if t2[k] > t2[k - 1] and t2[k] > t2[k + 1] and t2[k] > 0.5]
print(f"N=30: {len(peaks)} resonant peaks between "
      f"{peaks[0]:.3f} and {peaks[-1]:.3f} "
      f"(band edges at {1 - 4 * 0.05:.2f} and {1 + 4 * 0.05:.2f})")
