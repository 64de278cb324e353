"""End-to-end acceptance checks of the engine's headline behaviors.

One test per claim, in a fixed order, each printing the measured numbers
next to the required ones.  Three of the checks encode idealized targets
that the model itself does not meet, and they fail by design rather than
being loosened:

* the weak-drive linearity check (test 04) requires the six-atom steady
  transmission to track the one-photon lineshape within 1e-3, but at the
  two band-edge resonances the long photon dwell time amplifies
  saturation to 2.8e-3 at the stated intensity; the defect shrinks
  linearly as the drive is reduced, so the limit is right while the
  pinned working point is not yet deep enough into it;
* the finite-power length-independence check (test 05) requires a
  relative spread below 1e-4 over N = 2..7, but at saturating drive the
  chain shows a damped even/odd alternation of a few percent before the
  transmission levels off, so only the weak-drive leg meets the bound;
* the scaling-exponent flatness check (test 09) requires |kappa| < 0.02
  at strong density coupling, but over the N = 4..7 window the fitted
  exponent is still inflated by finite-size transients to about 0.065.

All three behaviors are cross-checked (time marching against direct
solves, assembly against dense references), so the failures record
genuine model properties, not implementation defects.
"""

import functools

import numpy as np
import pytest

from chainlight import (
    DriveSpec,
    MediumSpec,
    LongRange,
    assemble,
    brute_force_generator,
    evolve,
    rabi_from_intensity,
    reflection,
    scaling_exponent,
    single_photon,
    steady_state,
    t2_analytic,
    transmission,
    two_atom_reference,
)
from chainlight.mpo import pair_couplings

OMEGA_GRID = np.linspace(0.6, 1.4, 200)


@functools.lru_cache(maxsize=None)
def _transport(n, jx, jz, gamma, i_in, gamma_gamma=0.0, omega_p=1.0):
    """Steady transmission and reflection, cached across tests."""
    med = MediumSpec(
        n=n, jx=jx, jz=jz, gamma_l=gamma, gamma_r=gamma,
        gamma_gamma=gamma_gamma,
    )
    drv = DriveSpec(omega_p=omega_p, i_in=i_in)
    state = steady_state(assemble(med, drv))
    return transmission(state, med, drv), reflection(state, med, drv)


def test_01_two_atom_lineshape_matches_closed_form():
    cases = [
        ((1.0, 1.0), 0.05),
        ((1.0, 1.0), 0.1),
        ((0.8, 1.2), 0.05),
        ((1.2, 0.8), 0.05),
    ]
    worst = 0.0
    for omega, jx in cases:
        med = MediumSpec(n=2, omega=omega, jx=jx, jz=0.05,
                         gamma_l=0.1, gamma_r=0.1)
        for omega_p in OMEGA_GRID:
            got = single_photon(med, float(omega_p)).t
            want = t2_analytic(med, float(omega_p))
            worst = max(worst, abs(got - want) / max(abs(want), 1e-300))
    print(f"two-atom closed form: worst relative deviation {worst:.2e}")
    assert worst < 1e-12


def test_02_rabi_identity():
    value = rabi_from_intensity(1.6e-5, 0.1)
    print(f"rabi at the weak-drive working point: {value:.6f}")
    assert value == pytest.approx(0.0018, abs=5e-5)


def test_03_assembly_equals_dense_reference():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for n in (2, 3, 4, 5):
        for draw in range(20):
            lossy = draw % 2 == 1
            med = MediumSpec(
                n=n,
                omega=tuple(1.0 + 0.2 * rng.standard_normal(n)),
                jx=float(0.15 * rng.standard_normal()),
                jz=float(0.15 * rng.standard_normal()),
                gamma_l=float(rng.uniform(0.0, 0.3)),
                gamma_r=float(rng.uniform(0.0, 0.3)),
                gamma_lambda=float(rng.uniform(0.0, 0.08)) if lossy else 0.0,
                gamma_gamma=float(rng.uniform(0.0, 0.08)) if lossy else 0.0,
            )
            drv = DriveSpec(
                omega_p=float(1.0 + 0.1 * rng.standard_normal()),
                i_in=float(rng.uniform(0.0, 0.3)),
            )
            gen = assemble(med, drv)
            ref = brute_force_generator(med, drv)
            worst = max(
                worst,
                np.abs(gen.as_dense() - ref.as_dense()).max(),
                np.abs(gen.source - ref.source).max(),
            )
    # and the hand-coded fifteen-variable system for two atoms
    med = MediumSpec(n=2, omega=(0.97, 1.05), jx=0.06, jz=0.08,
                     gamma_l=0.09, gamma_r=0.12,
                     gamma_lambda=0.02, gamma_gamma=0.03)
    drv = DriveSpec(omega_p=1.01, i_in=0.07)
    gen = assemble(med, drv)
    z_ref, src_ref, order = two_atom_reference(med, drv)
    perm = np.array([gen.labels.index(lab) for lab in order])
    worst2 = max(
        np.abs(gen.as_dense()[np.ix_(perm, perm)] - z_ref).max(),
        np.abs(gen.source[perm] - src_ref).max(),
    )
    print(f"assembly vs dense reference: {worst:.2e}; "
          f"vs two-atom transcription: {worst2:.2e}")
    assert worst < 1e-13
    assert worst2 < 1e-13


def test_04_weak_drive_reduces_to_one_photon():
    worst = {}
    for n, jx in ((2, 0.05), (6, 0.1)):
        med = MediumSpec(n=n, jx=jx, jz=0.05, gamma_l=0.1, gamma_r=0.1)
        dev = 0.0
        for omega_p in OMEGA_GRID:
            drv = DriveSpec(omega_p=float(omega_p), i_in=1.6e-5)
            state = steady_state(assemble(med, drv))
            t_many = transmission(state, med, drv)
            t_one = abs(single_photon(med, float(omega_p)).t) ** 2
            dev = max(dev, abs(t_many - t_one))
        worst[n] = dev
    print(f"weak drive vs one photon, worst absolute deviation: "
          f"N=2: {worst[2]:.2e}, N=6: {worst[6]:.2e}")
    assert worst[2] < 1e-3
    assert worst[6] < 1e-3, (
        f"six-atom deviation {worst[6]:.2e} sits at the two band-edge "
        "resonances, where the photon dwell time is longest and "
        "saturation is amplified; it shrinks linearly with drive power, "
        "so the one-photon limit is correct but the stated intensity is "
        "not yet deep enough into it"
    )


def test_05_matched_chain_length_independence():
    sizes = range(2, 8)
    spreads = {}
    for i_in in (1.6e-5, 0.04, 0.16):
        tvals = np.array(
            [_transport(n, 0.05, 0.0, 0.1, i_in)[0] for n in sizes]
        )
        spreads[i_in] = float((tvals.max() - tvals.min()) / tvals.mean())
    detail = ", ".join(
        f"I={i_in:g}: spread {s:.2e}" for i_in, s in spreads.items()
    )
    print(f"transmission spread over N=2..7 ({detail}); required < 1e-4")
    assert all(s < 1e-4 for s in spreads.values()), (
        f"length independence holds only in the weak-drive limit ({detail}); "
        "at saturating power the chain keeps a damped even/odd alternation "
        "of a few percent before leveling off"
    )


def test_06_lossless_flux_conservation():
    rng = np.random.default_rng(77)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 6))
        med = MediumSpec(
            n=n,
            omega=tuple(1.0 + 0.2 * rng.standard_normal(n)),
            jx=float(0.12 * rng.standard_normal()),
            jz=float(0.12 * rng.standard_normal()),
            gamma_l=float(rng.uniform(0.02, 0.3)),
            gamma_r=float(rng.uniform(0.02, 0.3)),
        )
        drv = DriveSpec(
            omega_p=float(1.0 + 0.1 * rng.standard_normal()),
            i_in=float(rng.uniform(1e-4, 0.3)),
        )
        state = steady_state(assemble(med, drv))
        defect = abs(
            transmission(state, med, drv) + reflection(state, med, drv) - 1.0
        )
        worst = max(worst, defect)
    print(f"lossless flux defect over 50 draws: worst {worst:.2e}")
    assert worst < 1e-8


def test_07_transient_overshoot_and_settling():
    med = MediumSpec(n=2, jx=0.05, jz=0.05, gamma_l=0.1, gamma_r=0.1)
    drv = DriveSpec(omega_p=1.0, i_in=1.6e-5)
    gen = assemble(med, drv)
    traj = evolve(gen, 400.0, dt_out=0.5)
    t_vals = np.array(
        [transmission(traj.state(k), med, drv) for k in range(len(traj))]
    )
    r_vals = np.array(
        [reflection(traj.state(k), med, drv) for k in range(len(traj))]
    )
    t_max = float(t_vals.max())
    # reflection starts at one, decays, then rebounds once before settling
    i_min = int(np.argmin(r_vals[: len(r_vals) // 8]))
    i_peak = i_min + int(np.argmax(r_vals[i_min:]))
    rebound = float(r_vals[i_peak] - r_vals[i_min])
    print(
        f"transient: max T {t_max:.4f} (>1), reflection rebound {rebound:.4f} "
        f"at t={traj.times[i_peak]:.1f}, T(inf)={t_vals[-1]:.6f}, "
        f"R(inf)={r_vals[-1]:.2e}"
    )
    assert t_max > 1.0
    assert rebound > 1e-3 and 0 < i_peak < len(traj) - 1
    assert r_vals[i_peak] > r_vals[-1]
    assert t_vals[-1] > 0.99
    assert r_vals[-1] < 0.01


def test_08_interaction_dips_the_eight_atom_transmission():
    t_by_ratio = {
        ratio: _transport(8, 0.05, 0.05 * ratio, 0.1, 0.16)[0]
        for ratio in (0.0, 1.0, 3.0)
    }
    print(
        "eight atoms at strong drive: "
        + ", ".join(f"T(Jz/Jx={r:g})={t:.4f}" for r, t in t_by_ratio.items())
    )
    assert t_by_ratio[1.0] < min(t_by_ratio[0.0], t_by_ratio[3.0])


def test_09_scaling_exponent_shape():
    sizes = (4, 5, 6, 7)
    kappa = {}
    for ratio in (0.0, 1.0, 3.0):
        tvals = [_transport(n, 0.05, 0.05 * ratio, 0.1, 0.16)[0] for n in sizes]
        kappa[ratio] = scaling_exponent(sizes, tvals).kappa
    print(
        "scaling exponents over N=4..7: "
        + ", ".join(f"kappa({r:g})={k:+.4f}" for r, k in kappa.items())
        + "; required |kappa|<0.02 at ratios 0 and 3, positive at 1"
    )
    assert abs(kappa[0.0]) < 0.02
    assert kappa[1.0] > 0.0
    assert abs(kappa[3.0]) < 0.02, (
        f"kappa at Jz/Jx=3 is {kappa[3.0]:+.4f} over N=4..7; the transmission "
        "is still rising toward its plateau in this window, which a "
        "four-point log fit reads as a nonzero exponent"
    )


def test_10_nonradiative_decay_turns_transport_exponential():
    sizes = np.arange(2, 8)
    tvals = np.array(
        [_transport(n, 0.05, 0.0, 0.1, 0.16, gamma_gamma=0.01)[0] for n in sizes]
    )
    slope, intercept = np.polyfit(sizes, np.log(tvals), 1)
    fitted = slope * sizes + intercept
    ss_res = float(np.sum((np.log(tvals) - fitted) ** 2))
    ss_tot = float(np.sum((np.log(tvals) - np.log(tvals).mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot
    print(
        f"lossy chain: log T vs N slope {slope:+.4f}, R^2 {r_squared:.4f} "
        "(required > 0.99)"
    )
    assert slope < 0.0
    assert r_squared > 0.99


def test_11_steep_long_range_limits():
    med_lr = MediumSpec(
        n=4, jx=0.05, jz=0.05, gamma_l=0.1, gamma_r=0.1,
        coupling=LongRange(alpha=20.0, beta=20.0, terms=1),
    )
    med_nn = MediumSpec(n=4, jx=0.05, jz=0.05, gamma_l=0.1, gamma_r=0.1)
    drv = DriveSpec(omega_p=1.0, i_in=0.04)
    diff = np.abs(
        assemble(med_lr, drv).as_dense() - assemble(med_nn, drv).as_dense()
    ).max()

    from chainlight import fit_powerlaw

    monotone = True
    worst_jump = 0.0
    for u in (1.0, 2.0, 3.0):
        residuals = [fit_powerlaw(u, terms, 8).residual for terms in (1, 2, 3, 4)]
        for a, b in zip(residuals, residuals[1:]):
            worst_jump = max(worst_jump, b - a)
            if b > a + 1e-15:
                monotone = False
    print(
        f"steep tail vs nearest neighbour: generator difference {diff:.2e} "
        f"(required < 1e-5); residual increase across term counts "
        f"{worst_jump:.1e} (required none)"
    )
    assert diff < 1e-5
    assert monotone
