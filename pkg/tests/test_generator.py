"""The assembled linear system against dense references.

Every structural route into the generator is checked against an
independent construction: the generic dense build row by row, the
hand-written two-atom system, and (for long-range chains) the pairwise
coupling matrices.
"""

import numpy as np
import pytest

from chainlight import (
    DriveSpec,
    LongRange,
    MediumSpec,
    assemble,
    brute_force_generator,
    two_atom_reference,
)
from chainlight.mpo import pair_couplings
from chainlight.reference import TWO_ATOM_ORDER


def _random_setup(rng, n, lossy):
    med = MediumSpec(
        n=n,
        omega=tuple(1.0 + 0.25 * rng.standard_normal(n)),
        jx=float(0.15 * rng.standard_normal()),
        jz=float(0.15 * rng.standard_normal()),
        gamma_l=float(rng.uniform(0.0, 0.3)),
        gamma_r=float(rng.uniform(0.0, 0.3)),
        gamma_lambda=float(rng.uniform(0.0, 0.08)) if lossy else 0.0,
        gamma_gamma=float(rng.uniform(0.0, 0.08)) if lossy else 0.0,
    )
    drv = DriveSpec(
        omega_p=float(1.0 + 0.1 * rng.standard_normal()),
        i_in=float(rng.uniform(0.0, 0.25)),
    )
    return med, drv


def test_matches_dense_reference():
    rng = np.random.default_rng(101)
    for n in (2, 3, 4):
        for lossy in (False, True):
            med, drv = _random_setup(rng, n, lossy)
            gen = assemble(med, drv)
            ref = brute_force_generator(med, drv)
            np.testing.assert_allclose(
                gen.as_dense(), ref.as_dense(), atol=1e-13
            )
            np.testing.assert_allclose(gen.source, ref.source, atol=1e-13)


def test_matches_two_atom_transcription():
    rng = np.random.default_rng(55)
    med, drv = _random_setup(rng, 2, lossy=True)
    gen = assemble(med, drv)
    z_ref, src_ref, order = two_atom_reference(med, drv)
    assert order == TWO_ATOM_ORDER
    perm = np.array([gen.labels.index(lab) for lab in order])
    z = gen.as_dense()[np.ix_(perm, perm)]
    np.testing.assert_allclose(z, z_ref, atol=1e-13)
    np.testing.assert_allclose(gen.source[perm], src_ref, atol=1e-13)


def test_source_structure():
    med = MediumSpec(n=3)
    drv = DriveSpec(omega_p=1.0, i_in=0.05)
    gen = assemble(med, drv)
    up, dn = gen.labels.drive_indices()
    nz = np.nonzero(gen.source)[0]
    assert set(nz) == {up, dn}
    assert gen.source[up] == pytest.approx(1j * gen.omega_l)
    assert gen.source[dn] == pytest.approx(-1j * gen.omega_l)


def test_conjugation_symmetry_of_the_system():
    # conjugating every equation permutes the system onto itself
    rng = np.random.default_rng(77)
    med, drv = _random_setup(rng, 3, lossy=True)
    gen = assemble(med, drv)
    perm = gen.labels.conjugate_permutation()
    z = gen.as_dense()
    np.testing.assert_allclose(z[np.ix_(perm, perm)].conj(), z, atol=1e-13)
    np.testing.assert_allclose(gen.source[perm].conj(), gen.source, atol=1e-13)


def test_generic_path_equals_cached_path():
    med = MediumSpec(n=4, jx=0.05, jz=0.05)
    drv = DriveSpec(omega_p=1.0, i_in=0.04)
    fast = assemble(med, drv)
    slow = assemble(med, drv, force_generic=True)
    diff = fast.as_sparse() - slow.as_sparse()
    assert abs(diff).max() < 1e-15


def test_sparsity_stays_linear_per_row():
    for n in (3, 4, 5):
        med = MediumSpec(
            n=n, jx=0.05, jz=0.03, gamma_l=0.1, gamma_r=0.12,
            gamma_lambda=0.01, gamma_gamma=0.02,
        )
        gen = assemble(med, DriveSpec(omega_p=0.98, i_in=0.1))
        assert gen.as_sparse().nnz <= gen.dim * (2 * n + 1)


def test_spectrum_is_dissipative():
    rng = np.random.default_rng(5)
    med, drv = _random_setup(rng, 3, lossy=True)
    gen = assemble(med, drv)
    ev = np.linalg.eigvals(gen.as_dense())
    assert ev.real.max() <= 1e-12


def test_length_cap():
    med = MediumSpec(n=9)
    with pytest.raises(ValueError, match="cap"):
        assemble(med, DriveSpec(omega_p=1.0, i_in=0.01))
    med5 = MediumSpec(n=5)
    with pytest.raises(ValueError):
        assemble(med5, DriveSpec(omega_p=1.0, i_in=0.01), n_cap=4)


def test_single_atom_chain():
    med = MediumSpec(n=1, omega=1.07, jx=0.0, jz=0.0, gamma_l=0.06, gamma_r=0.09)
    drv = DriveSpec(omega_p=1.0, i_in=0.012)
    gen = assemble(med, drv)
    assert gen.dim == 3
    ref = brute_force_generator(med, drv)
    np.testing.assert_allclose(gen.as_dense(), ref.as_dense(), atol=1e-14)


def test_long_range_matches_reference_with_fitted_profile():
    med = MediumSpec(
        n=4, jx=0.05, jz=0.05, gamma_l=0.1, gamma_r=0.1,
        coupling=LongRange(alpha=1.5, beta=2.5, terms=2),
    )
    drv = DriveSpec(omega_p=1.0, i_in=0.04)
    gen = assemble(med, drv)
    ref = brute_force_generator(
        med, drv, couplings=pair_couplings(med, fitted=True)
    )
    np.testing.assert_allclose(gen.as_dense(), ref.as_dense(), atol=1e-13)


def test_dense_and_sparse_agree():
    med = MediumSpec(n=3, jx=0.05, jz=0.02)
    drv = DriveSpec(omega_p=1.0, i_in=0.02)
    gen = assemble(med, drv)
    np.testing.assert_allclose(
        gen.as_sparse().toarray(), gen.as_dense(), atol=0.0
    )
