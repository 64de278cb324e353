"""One-excitation scattering: closed forms, unitarity and chain-length trends."""

import numpy as np
import pytest

from chainlight import LongRange, MediumSpec, scan, single_photon, t2_analytic
from chainlight.scattering import _tridiag_solve


def _one_atom_t(omega_p, omega_a, gl, gr):
    # solve the single-site system by hand
    delta = omega_a - omega_p
    e1 = -np.sqrt(2.0 * gl) / (delta - 1j * (gl + gr))
    return -1j * np.sqrt(2.0 * gr) * e1


def test_single_atom_closed_form():
    med = MediumSpec(n=1, omega=1.0, jx=0.0, jz=0.0, gamma_l=0.07, gamma_r=0.11)
    for omega_p in np.linspace(0.8, 1.2, 17):
        res = single_photon(med, float(omega_p))
        assert res.t == pytest.approx(
            _one_atom_t(omega_p, 1.0, 0.07, 0.11), rel=1e-12
        )


def test_single_atom_symmetric_resonance():
    med = MediumSpec(n=1, omega=1.0, jx=0.0, jz=0.0, gamma_l=0.1, gamma_r=0.1)
    res = single_photon(med, 1.0)
    assert res.t == pytest.approx(-1.0, abs=1e-14)
    assert abs(res.r) < 1e-14


def test_two_atoms_match_the_closed_form():
    med = MediumSpec(n=2, omega=(0.9, 1.1), jx=0.07, jz=0.05,
                     gamma_l=0.08, gamma_r=0.14)
    for omega_p in np.linspace(0.7, 1.3, 25):
        res = single_photon(med, float(omega_p))
        assert res.t == pytest.approx(t2_analytic(med, float(omega_p)), rel=1e-12)


def test_unitarity_random_chains():
    rng = np.random.default_rng(909)
    for _ in range(20):
        n = int(rng.integers(1, 7))
        med = MediumSpec(
            n=n,
            omega=tuple(1.0 + 0.2 * rng.standard_normal(n)),
            jx=float(0.1 * rng.standard_normal()),
            jz=0.0,
            gamma_l=float(rng.uniform(0.01, 0.3)),
            gamma_r=float(rng.uniform(0.01, 0.3)),
        )
        res = single_photon(med, float(1.0 + 0.15 * rng.standard_normal()))
        assert res.transmittance + res.reflectance == pytest.approx(1.0, abs=1e-12)


def test_matched_chain_is_transparent_at_any_length():
    # 2 Jx equal to the boundary rates makes the resonant chain transparent
    for n in (2, 7, 25, 50):
        med = MediumSpec(n=n, jx=0.05, jz=0.0, gamma_l=0.1, gamma_r=0.1)
        res = single_photon(med, 1.0)
        assert abs(res.t) == pytest.approx(1.0, abs=1e-10)
        assert abs(res.r) < 1e-10


def test_mismatched_chain_oscillates_without_decay():
    vals = []
    for n in range(2, 41):
        med = MediumSpec(n=n, jx=0.03, jz=0.0, gamma_l=0.1, gamma_r=0.1)
        vals.append(abs(single_photon(med, 1.0).t) ** 2)
    vals = np.array(vals)
    assert vals.max() - vals.min() > 0.1  # a genuine oscillation
    # the envelope does not decay: late lengths still reach the early maximum
    assert vals[28:].max() >= vals[:11].max() - 1e-9
    assert vals.min() > 0.5


def test_detuned_matched_chain_oscillates():
    vals = []
    for n in range(2, 41):
        med = MediumSpec(n=n, jx=0.05, jz=0.0, gamma_l=0.1, gamma_r=0.1)
        vals.append(abs(single_photon(med, 1.02).t) ** 2)
    vals = np.array(vals)
    assert vals.max() - vals.min() > 1e-3
    assert vals[28:].max() >= vals[:11].max() - 1e-3


def test_interaction_does_not_touch_one_excitation():
    # the density-density coupling is invisible to a single excitation
    base = MediumSpec(n=4, jx=0.05, jz=0.0, gamma_l=0.1, gamma_r=0.1)
    coupled = MediumSpec(n=4, jx=0.05, jz=0.4, gamma_l=0.1, gamma_r=0.1)
    for omega_p in (0.9, 1.0, 1.07):
        a = single_photon(base, omega_p)
        b = single_photon(coupled, omega_p)
        assert a.t == pytest.approx(b.t, rel=1e-14)


def test_steep_long_range_equals_nearest_neighbour():
    nn = MediumSpec(n=5, jx=0.05, jz=0.0, gamma_l=0.1, gamma_r=0.1)
    lr = MediumSpec(n=5, jx=0.05, jz=0.0, gamma_l=0.1, gamma_r=0.1,
                    coupling=LongRange(alpha=20.0, beta=20.0))
    for omega_p in np.linspace(0.85, 1.15, 13):
        a = single_photon(nn, float(omega_p))
        b = single_photon(lr, float(omega_p))
        assert a.t == pytest.approx(b.t, abs=1e-5)


def test_long_range_oscillation_grows_as_the_tail_flattens():
    def amplitude(alpha):
        vals = []
        for n in range(10, 31):
            med = MediumSpec(n=n, jx=0.05, jz=0.0, gamma_l=0.1, gamma_r=0.1,
                             coupling=LongRange(alpha=alpha, beta=alpha))
            vals.append(abs(single_photon(med, 1.0).t) ** 2)
        return max(vals) - min(vals)

    a1, a2, a3 = amplitude(1.0), amplitude(2.0), amplitude(3.0)
    assert a1 > a2 > a3
    assert a3 > 1e-3  # matched resonant chains still oscillate when long range


def test_scan_wraps_single_photon():
    med = MediumSpec(n=3, jx=0.05, jz=0.0, gamma_l=0.1, gamma_r=0.1)
    grid = np.linspace(0.9, 1.1, 5)
    results = scan(med, grid)
    assert [r.omega_p for r in results] == pytest.approx(list(grid))
    for r in results:
        assert r.t == single_photon(med, r.omega_p).t


def test_tridiagonal_solver_against_dense():
    rng = np.random.default_rng(44)
    n = 12
    diag = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    off = 0.37 - 0.21j
    rhs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    z = np.diag(diag) + off * (np.eye(n, k=1) + np.eye(n, k=-1))
    x = _tridiag_solve(diag.astype(complex), off, rhs.astype(complex))
    np.testing.assert_allclose(x, np.linalg.solve(z, rhs), atol=1e-11)


def test_tridiagonal_solver_rejects_zero_pivot():
    with pytest.raises(ValueError):
        _tridiag_solve(np.zeros(3, dtype=complex), 0.0, np.ones(3, dtype=complex))
