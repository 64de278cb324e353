"""How steady transmission scales with chain length.

Three regimes, all at resonance:

1. matched boundaries (2Jx = Gamma_L = Gamma_R), no density coupling:
   transmission is essentially independent of N at every power, the
   transport is ballistic;
2. density coupling switched on at strong drive: the fitted exponent
   kappa in T ~ N^-kappa picks up a positive value near Jz/Jx = 1 and
   falls back toward zero on either side;
3. a nonradiative decay channel on every atom: T decays exponentially
   with N no matter how the couplings are tuned.
"""

import numpy as np

from chainlight import (DriveSpec, MediumSpec, assemble, scaling_exponent,
                        steady_state, transmission)


def transport(n, jz, i_in, gamma_gamma=0.0):
    med = MediumSpec(n=n, jx=0.05, jz=jz, gamma_l=0.1, gamma_r=0.1,
                     gamma_gamma=gamma_gamma)
    drv = DriveSpec(omega_p=1.0, i_in=i_in)
    return transmission(steady_state(assemble(med, drv)), med, drv)


print("-- matched XX chain, T vs N --")
sizes = range(2, 8)
for i_in in (1.6e-5, 0.04, 0.16):
    tvals = [transport(n, 0.0, i_in) for n in sizes]
    spread = (max(tvals) - min(tvals)) / np.mean(tvals)
    print(f"I_in={i_in:.1e}: " +
          " ".join(f"{t:.4f}" for t in tvals) +
          f"   relative spread {spread:.1e}")

print()
print("-- fitted exponent kappa over N=4..7 at I_in=0.16 --")
for ratio in (0.0, 0.5, 1.0, 2.0, 3.0):
    tvals = [transport(n, 0.05 * ratio, 0.16) for n in (4, 5, 6, 7)]
    fit = scaling_exponent((4, 5, 6, 7), tvals)
    print(f"Jz/Jx={ratio:3.1f}: kappa={fit.kappa:+.4f}  R^2={fit.r_squared:.4f}")

print()
print("-- nonradiative decay Gamma_gamma=0.01, log T vs N --")
tvals = [transport(n, 0.0, 0.16, gamma_gamma=0.01) for n in sizes]
slope, intercept = np.polyfit(list(sizes), np.log(tvals), 1)
print("T:", " ".join(f"{t:.4f}" for t in tvals))
print(f"decay per atom exp({slope:+.4f}) = {np.exp(slope):.4f}")
