"""Power-law couplings handled through sums of decaying exponentials.

A tail r^-u over r = 1..rmax is compressed into a few exponential terms
by a damped least-squares fit.  The table shows the fit sharpening as
terms are added.  Two limits close the loop: a very steep tail collapses
onto the nearest-neighbour model, and moderate tails shift the one-photon
oscillation with length.
"""

import numpy as np

from chainlight import (DriveSpec, LongRange, MediumSpec, assemble,
                        fit_powerlaw, single_photon)

print("fit residual vs number of exponential terms (rmax=8)")
print("  u      L=1        L=2        L=3        L=4")
for u in (1.0, 2.0, 3.0):
    residuals = [fit_powerlaw(u, terms, 8).residual for terms in (1, 2, 3, 4)]
    print(f"  {u:.0f}  " + "  ".join(f"{r:9.2e}" for r in residuals))

# steep limit: alpha = beta = 20 leaves only the r = 1 bond
med_lr = MediumSpec(n=4, jx=0.05, jz=0.05, gamma_l=0.1, gamma_r=0.1,
                    coupling=LongRange(alpha=20.0, beta=20.0, terms=1))
med_nn = MediumSpec(n=4, jx=0.05, jz=0.05, gamma_l=0.1, gamma_r=0.1)
drv = DriveSpec(omega_p=1.0, i_in=0.04)
diff = np.abs(assemble(med_lr, drv).as_dense()
              - assemble(med_nn, drv).as_dense()).max()
print(f"\nsteep-tail generator vs nearest neighbour: max entry diff {diff:.1e}")

# moderate tails: the farther the exchange reaches, the wider the
# internal band, so the fixed boundary coupling is more mismatched and
# the oscillation with N grows
print("\nresonant |t_N|^2 for N=2..12, Jx tail r^-alpha (Gamma=0.1)")
for alpha in (1.0, 2.0, 3.0):
    vals = []
    for n in range(2, 13):
        med = MediumSpec(n=n, jx=0.03, jz=0.0, gamma_l=0.1, gamma_r=0.1,
                         coupling=LongRange(alpha=alpha, beta=20.0, terms=3))
        vals.append(abs(single_photon(med, 1.0).t) ** 2)
    print(f"  alpha={alpha:.0f}: " + " ".join(f"{v:.3f}" for v in vals)
          + f"   swing {max(vals) - min(vals):.3f}")
