"""Independent reference builds of the generator, used for cross-checks.

Everything here works on dense 2**n matrices and scales accordingly; it
exists so the sparse assembly in :mod:`chainlight.generator` can be
compared against a construction that shares none of its bookkeeping.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from .generator import Generator
from .medium import DriveSpec, LongRange, MediumSpec, NearestNeighbor
from .spinops import (
    LOCAL_BASIS,
    LOWER_2,
    NUMBER_2,
    RAISE_2,
    LabelIndexMap,
    _DUAL,
    site_operator,
)

_CHUNK = 256


def _expand_batch(mats: NDArray, n: int) -> NDArray[np.complex128]:
    # batched version of spinops.expand_operator: (m, 2**n, 2**n) -> (m, 4**n)
    m = mats.shape[0]
    tensor = mats.reshape((m,) + (2,) * (2 * n))
    order = [0] + [axis for site in range(n) for axis in (1 + site, 1 + n + site)]
    tensor = tensor.transpose(order).reshape((m,) + (4,) * n)
    for site in range(n):
        tensor = np.tensordot(_DUAL, tensor, axes=(1, 1 + site))
        tensor = np.moveaxis(tensor, 0, 1 + site)
    return tensor.reshape(m, 4**n)


def _label_stack(n: int) -> NDArray[np.complex128]:
    ops = LOCAL_BASIS.copy()
    for _ in range(n - 1):
        dim = ops.shape[-1]
        ops = np.einsum("aij,bkl->abikjl", ops, LOCAL_BASIS).reshape(
            -1, 2 * dim, 2 * dim
        )
    return ops


def brute_force_generator(
    medium: MediumSpec,
    drive: DriveSpec,
    couplings: tuple[NDArray, NDArray] | None = None,
) -> Generator:
    """Dense construction of the generator, one label at a time.

    The Hamiltonian is built directly from on-site detunings and pairwise
    coupling matrices, and each row of Z comes from expanding the full
    2**n Heisenberg right-hand side of that row's product operator.  No
    bond templates, no sparsity bookkeeping.

    ``couplings`` overrides the pairwise (hop, density) matrices; it is
    required for long-range chains, where the caller decides whether the
    raw or the fitted profile is meant.
    """
    n = medium.n
    if n > 6:
        raise ValueError("the dense reference build is limited to n <= 6")
    if couplings is None:
        if isinstance(medium.coupling, LongRange):
            raise ValueError("pass explicit coupling matrices for long range")
        if not isinstance(medium.coupling, NearestNeighbor):
            raise TypeError(f"unknown coupling kind {medium.coupling!r}")
        cx = np.zeros((n, n))
        cz = np.zeros((n, n))
        for i in range(n - 1):
            cx[i, i + 1] = 2.0 * medium.jx
            cz[i, i + 1] = 4.0 * medium.jz
    else:
        cx, cz = (np.asarray(c, dtype=float) for c in couplings)

    det = medium.detunings(drive.omega_p)
    omega_l = drive.omega_l(medium)
    dim = 2**n

    sig = [site_operator(LOWER_2, j + 1, n) for j in range(n)]
    sdg = [site_operator(RAISE_2, j + 1, n) for j in range(n)]
    num = [site_operator(NUMBER_2, j + 1, n) for j in range(n)]

    ham = np.zeros((dim, dim), dtype=complex)
    for j in range(n):
        ham += det[j] * num[j]
    for i in range(n):
        for j in range(i + 1, n):
            hop = cx[i, j] * (sdg[i] @ sig[j])
            ham += hop + hop.conj().T
            ham += cz[i, j] * (num[i] @ num[j])

    ops = _label_stack(n)
    z_full = np.zeros((4**n, 4**n), dtype=complex)
    for start in range(0, 4**n, _CHUNK):
        o = ops[start : start + _CHUNK]
        rhs = -1j * (o @ ham - ham @ o)

        def decay(rate, lower, raiser, acc=None):
            c_low = o @ lower - lower @ o
            c_rai = o @ raiser - raiser @ o
            return rate * (raiser @ c_low - c_rai @ lower), c_low, c_rai

        term, c_low, c_rai = decay(medium.gamma_l + medium.gamma_gamma, sig[0], sdg[0])
        rhs += term
        if omega_l != 0.0:
            rhs += -1j * omega_l * (c_low + c_rai)
        term, _, _ = decay(medium.gamma_r + medium.gamma_gamma, sig[n - 1], sdg[n - 1])
        rhs += term
        if medium.gamma_gamma != 0.0:
            for j in range(1, n - 1):
                term, _, _ = decay(medium.gamma_gamma, sig[j], sdg[j])
                rhs += term
        if medium.gamma_lambda != 0.0:
            for j in range(n):
                c_num = o @ num[j] - num[j] @ o
                rhs += medium.gamma_lambda * (num[j] @ c_num - c_num @ num[j])

        z_full[start : start + _CHUNK] = _expand_batch(rhs, n)

    if np.max(np.abs(z_full[0])) > 1e-12:
        raise AssertionError("the identity label acquired dynamics")

    source = z_full[1:, 0].copy()
    z = np.ascontiguousarray(z_full[1:, 1:])
    return Generator(
        medium=medium,
        drive=drive,
        labels=LabelIndexMap(n),
        z=z,
        source=source,
        omega_l=omega_l,
    )


# ---------------------------------------------------------------------------
# Two atoms, transcribed by hand.

#: Variable ordering of the two-atom system as commonly tabulated: all
#: labels on site 1 first within each site-2 digit, conjugate pairs
#: interleaved.  Digits are (site 1, site 2).
TWO_ATOM_ORDER: tuple[tuple[int, int], ...] = (
    (1, 0),  # <sdg_1>
    (2, 0),  # <sig_1>
    (3, 0),  # <n_1>
    (0, 1),
    (1, 1),
    (2, 1),
    (3, 1),
    (0, 2),  # <sig_2>
    (1, 2),  # <sdg_1 sig_2>
    (2, 2),
    (3, 2),
    (0, 3),  # <n_2>
    (1, 3),
    (2, 3),
    (3, 3),
)


def two_atom_reference(
    medium: MediumSpec, drive: DriveSpec
) -> tuple[NDArray, NDArray, tuple[tuple[int, int], ...]]:
    """Hand-written 15-variable system for two atoms.

    Returns (z, source, order) with rows/columns ordered by
    TWO_ATOM_ORDER.  Transcribed equation by equation from the
    adjoint-equation form; the conjugate rows are generated by the
    pairing rule z[l*, m*] = conj(z[l, m]).
    """
    if medium.n != 2:
        raise ValueError("this reference covers exactly two atoms")
    if not isinstance(medium.coupling, NearestNeighbor):
        raise ValueError("this reference covers nearest-neighbour coupling")
    d1, d2 = medium.detunings(drive.omega_p)
    w1, w2 = medium.omega
    jx, jz = medium.jx, medium.jz
    gl = medium.gamma_l + medium.gamma_gamma  # dressed left decay
    gr = medium.gamma_r + medium.gamma_gamma
    glam = medium.gamma_lambda
    om = drive.omega_l(medium)

    idx = {label: k for k, label in enumerate(TWO_ATOM_ORDER)}
    S1s, S1, S11 = idx[(1, 0)], idx[(2, 0)], idx[(3, 0)]
    S2s, S3s, S12s, S112s = idx[(0, 1)], idx[(1, 1)], idx[(2, 1)], idx[(3, 1)]
    S2, S12, S3, S112 = idx[(0, 2)], idx[(1, 2)], idx[(2, 2)], idx[(3, 2)]
    S22, S122s, S122, S1122 = idx[(0, 3)], idx[(1, 3)], idx[(2, 3)], idx[(3, 3)]

    z = np.zeros((15, 15), dtype=complex)
    source = np.zeros(15, dtype=complex)

    # d<sig_1>
    z[S1, S1] = -(1j * d1 + gl + glam)
    z[S1, S112] = 4j * jx
    z[S1, S2] = -2j * jx
    z[S1, S122] = -4j * jz
    z[S1, S11] = 2j * om
    source[S1] = -1j * om

    # d<sig_2>
    z[S2, S2] = -(1j * d2 + gr + glam)
    z[S2, S122] = 4j * jx
    z[S2, S1] = -2j * jx
    z[S2, S112] = -4j * jz

    # d<n_1>
    z[S11, S11] = -2.0 * gl
    z[S11, S12] = -2j * jx
    z[S11, S12s] = 2j * jx
    z[S11, S1] = 1j * om
    z[S11, S1s] = -1j * om

    # d<n_2>
    z[S22, S22] = -2.0 * gr
    z[S22, S12] = 2j * jx
    z[S22, S12s] = -2j * jx

    # d<sig_1 sig_2>
    z[S3, S3] = -(1j * (d1 + d2 + 4.0 * jz) + gl + gr + 2.0 * glam)
    z[S3, S112] = 2j * om
    z[S3, S2] = -1j * om

    # d<sdg_1 sig_2>
    z[S12, S12] = 1j * (w1 - w2) - gl - gr - 2.0 * glam
    z[S12, S22] = 2j * jx
    z[S12, S11] = -2j * jx
    z[S12, S2] = 1j * om
    z[S12, S112] = -2j * om

    # d<sig_1 n_2>
    z[S122, S122] = -(1j * (d1 + 4.0 * jz) + gl + 2.0 * gr + glam)
    z[S122, S112] = 2j * jx
    z[S122, S1122] = 2j * om
    z[S122, S22] = -1j * om

    # d<n_1 sig_2>
    z[S112, S112] = -(1j * (d2 + 4.0 * jz) + 2.0 * gl + gr + glam)
    z[S112, S122] = 2j * jx
    z[S112, S3] = 1j * om
    z[S112, S12] = -1j * om

    # d<n_1 n_2>
    z[S1122, S1122] = -2.0 * (gl + gr)
    z[S1122, S122] = 1j * om
    z[S1122, S122s] = -1j * om

    # Conjugate rows via the pairing rule.
    swap = {0: 0, 1: 2, 2: 1, 3: 3}
    conj_of = {idx[(a, b)]: idx[(swap[a], swap[b])] for a, b in TWO_ATOM_ORDER}
    transcribed = {S1, S2, S11, S22, S3, S12, S122, S112, S1122}
    for row in transcribed:
        crow = conj_of[row]
        if crow == row:
            continue
        for col in range(15):
            z[crow, conj_of[col]] = np.conj(z[row, col])
        source[crow] = np.conj(source[row])

    return z, source, TWO_ATOM_ORDER
