"""Matrix-product templates for the chain Hamiltonian in the rotating frame.

The medium Hamiltonian splits into bond terms

    H_[i,i+1] = 2*Jx (sigma_i^dag sigma_{i+1} + h.c.) + 4*Jz n_i n_{i+1}
                + (dw~_i n_i + dw~_{i+1} n_{i+1}) / 2

where the boundary-aware detuning weights dw~ double the bare detuning
omega_j - omega_p on the two end sites, so that summing the bonds recovers
every on-site detuning exactly once.  Each bond is encoded by a 1x5 row of
local operators acting on the left site and a 5x1 column acting on the
right site; their contraction is the 4x4 bond Hamiltonian consumed by the
generator assembly.

For power-law couplings the Hamiltonian is written as a genuine matrix
product operator whose virtual dimension is 3*L + 2 for an L-term
sum-of-exponentials approximation of the coupling profile: one channel per
exponential for each of the raise, lower and density couplings, plus the
two bookkeeping states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .longrange import ExpFit, fit_powerlaw
from .medium import LongRange, MediumSpec, NearestNeighbor
from .spinops import IDENTITY_2, LOWER_2, NUMBER_2, RAISE_2


@dataclass(frozen=True)
class BondMpo:
    """Per-bond operator templates of a nearest-neighbour chain.

    ``bonds[i]`` holds the pair (row, col) for the bond between sites i+1
    and i+2, each an array of shape (5, 2, 2).
    """

    n: int
    bonds: tuple[tuple[NDArray, NDArray], ...]

    def bond_hamiltonian(self, i: int) -> NDArray[np.complex128]:
        """Dense 4x4 Hamiltonian of bond i (0-based), left site major."""
        row, col = self.bonds[i]
        out = np.zeros((4, 4), dtype=complex)
        for k in range(5):
            out += np.kron(row[k], col[k])
        return out


def bond_mpo(medium: MediumSpec, omega_p: float) -> BondMpo:
    """Build the bond templates of a nearest-neighbour chain.

    For n = 1 there are no bonds and the generator falls back to a
    single-site detuning term.
    """
    if not isinstance(medium.coupling, NearestNeighbor):
        raise ValueError("bond templates describe nearest-neighbour chains")
    det = medium.detunings(omega_p)
    n = medium.n
    bonds = []
    for i in range(n - 1):
        w_left = 2.0 * det[i] if i == 0 else det[i]
        w_right = 2.0 * det[i + 1] if i + 1 == n - 1 else det[i + 1]
        row = np.stack(
            [
                0.5 * w_left * NUMBER_2,
                2.0 * medium.jx * RAISE_2,
                2.0 * medium.jx * LOWER_2,
                4.0 * medium.jz * NUMBER_2,
                IDENTITY_2,
            ]
        )
        col = np.stack(
            [
                IDENTITY_2,
                LOWER_2,
                RAISE_2,
                NUMBER_2,
                0.5 * w_right * NUMBER_2,
            ]
        )
        bonds.append((row, col))
    return BondMpo(n=n, bonds=tuple(bonds))


@dataclass(frozen=True)
class LongRangeMpo:
    """Site tensors of the long-range Hamiltonian MPO.

    ``tensors[j]`` has shape (chi_left, chi_right, 2, 2); the first and
    last tensors carry a trivial outer bond.  ``chi`` is the full virtual
    dimension 3*L + 2.
    """

    n: int
    chi: int
    tensors: tuple[NDArray, ...]
    fit_x: ExpFit
    fit_z: ExpFit

    def contract(self) -> NDArray[np.complex128]:
        """Dense 2**n Hamiltonian obtained by contracting the chain."""
        # running[b] is the operator on the sites consumed so far that is
        # paired with virtual state b.
        running = self.tensors[0][0]
        for tensor in self.tensors[1:]:
            dim = running.shape[-1]
            chi_r = tensor.shape[1]
            nxt = np.zeros((chi_r, 2 * dim, 2 * dim), dtype=complex)
            for b in range(running.shape[0]):
                for c in range(chi_r):
                    block = tensor[b, c]
                    if np.any(block):
                        nxt[c] += np.kron(running[b], block)
            running = nxt
        return running[0]


def longrange_mpo(medium: MediumSpec, omega_p: float) -> LongRangeMpo:
    """Build the MPO of a power-law coupled chain.

    The hop and density coupling profiles r**-alpha and r**-beta are each
    replaced by their L-term sum-of-exponentials fit up to distance rmax
    (chain length minus one by default); the virtual dimension is 3*L + 2.
    """
    coupling = medium.coupling
    if not isinstance(coupling, LongRange):
        raise ValueError("the chain does not declare long-range couplings")
    if medium.n < 2:
        raise ValueError("a long-range chain needs at least two sites")
    fit_x, fit_z = longrange_fits(medium)
    det = medium.detunings(omega_p)
    n = medium.n
    L = coupling.terms
    chi = 3 * L + 2

    def first_tensor() -> NDArray:
        t = np.zeros((1, chi, 2, 2), dtype=complex)
        t[0, 0] = det[0] * NUMBER_2
        for k in range(L):
            t[0, 1 + k] = 2.0 * medium.jx * fit_x.gammas[k] * RAISE_2
            t[0, 1 + L + k] = 2.0 * medium.jx * fit_x.gammas[k] * LOWER_2
            t[0, 1 + 2 * L + k] = 4.0 * medium.jz * fit_z.gammas[k] * NUMBER_2
        t[0, chi - 1] = IDENTITY_2
        return t

    def bulk_tensor(j: int) -> NDArray:
        t = np.zeros((chi, chi, 2, 2), dtype=complex)
        t[0, 0] = IDENTITY_2
        for k in range(L):
            t[1 + k, 0] = LOWER_2
            t[1 + k, 1 + k] = fit_x.deltas[k] * IDENTITY_2
            t[1 + L + k, 0] = RAISE_2
            t[1 + L + k, 1 + L + k] = fit_x.deltas[k] * IDENTITY_2
            t[1 + 2 * L + k, 0] = NUMBER_2
            t[1 + 2 * L + k, 1 + 2 * L + k] = fit_z.deltas[k] * IDENTITY_2
        t[chi - 1, 0] = det[j] * NUMBER_2
        for k in range(L):
            t[chi - 1, 1 + k] = 2.0 * medium.jx * fit_x.gammas[k] * RAISE_2
            t[chi - 1, 1 + L + k] = 2.0 * medium.jx * fit_x.gammas[k] * LOWER_2
            t[chi - 1, 1 + 2 * L + k] = 4.0 * medium.jz * fit_z.gammas[k] * NUMBER_2
        t[chi - 1, chi - 1] = IDENTITY_2
        return t

    def last_tensor() -> NDArray:
        t = np.zeros((chi, 1, 2, 2), dtype=complex)
        t[0, 0] = IDENTITY_2
        for k in range(L):
            t[1 + k, 0] = LOWER_2
            t[1 + L + k, 0] = RAISE_2
            t[1 + 2 * L + k, 0] = NUMBER_2
        t[chi - 1, 0] = det[n - 1] * NUMBER_2
        return t

    tensors = [first_tensor()]
    tensors.extend(bulk_tensor(j) for j in range(1, n - 1))
    tensors.append(last_tensor())
    return LongRangeMpo(
        n=n, chi=chi, tensors=tuple(tensors), fit_x=fit_x, fit_z=fit_z
    )


def longrange_fits(medium: MediumSpec) -> tuple[ExpFit, ExpFit]:
    """Sum-of-exponentials fits of the hop and density profiles."""
    coupling = medium.coupling
    rmax = coupling.rmax if coupling.rmax is not None else medium.n - 1
    if rmax < coupling.terms:
        raise ValueError(
            f"cannot fit {coupling.terms} exponentials to {rmax} distances; "
            "reduce the number of terms or extend rmax"
        )
    fit_x = fit_powerlaw(coupling.alpha, coupling.terms, rmax)
    fit_z = fit_powerlaw(coupling.beta, coupling.terms, rmax)
    return fit_x, fit_z


def pair_couplings(
    medium: MediumSpec, fitted: bool = True
) -> tuple[NDArray, NDArray]:
    """Pairwise hop and density coupling matrices of the chain.

    Entry [i, j] multiplies sigma_i^dag sigma_j (hop) or n_i n_j (density)
    in the Hamiltonian; only i < j is populated.  For a long-range chain
    the profile is the fitted sum of exponentials when ``fitted`` is true,
    otherwise the raw power law.
    """
    n = medium.n
    cx = np.zeros((n, n))
    cz = np.zeros((n, n))
    if isinstance(medium.coupling, NearestNeighbor):
        for i in range(n - 1):
            cx[i, i + 1] = 2.0 * medium.jx
            cz[i, i + 1] = 4.0 * medium.jz
        return cx, cz
    coupling = medium.coupling
    if fitted:
        fit_x, fit_z = longrange_fits(medium)
        profile_x = fit_x.value
        profile_z = fit_z.value
    else:
        profile_x = lambda r: float(r) ** -coupling.alpha
        profile_z = lambda r: float(r) ** -coupling.beta
    for i in range(n):
        for j in range(i + 1, n):
            r = j - i
            cx[i, j] = 2.0 * medium.jx * profile_x(r)
            cz[i, j] = 4.0 * medium.jz * profile_z(r)
    return cx, cz


def total_hamiltonian(
    medium: MediumSpec, omega_p: float, fitted: bool = True
) -> NDArray[np.complex128]:
    """Dense rotating-frame medium Hamiltonian on 2**n.

    Built from pairwise couplings and on-site detunings; independent of
    the template contraction, which makes it a useful cross-check of the
    MPO forms.
    """
    from .spinops import site_operator

    n = medium.n
    det = medium.detunings(omega_p)
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    for j in range(n):
        h += det[j] * site_operator(NUMBER_2, j + 1, n)
    cx, cz = pair_couplings(medium, fitted=fitted)
    for i in range(n):
        for j in range(i + 1, n):
            if cx[i, j] == 0.0 and cz[i, j] == 0.0:
                continue
            raise_i = site_operator(RAISE_2, i + 1, n)
            lower_j = site_operator(LOWER_2, j + 1, n)
            hop = cx[i, j] * (raise_i @ lower_j)
            h += hop + hop.conj().T
            h += cz[i, j] * (
                site_operator(NUMBER_2, i + 1, n)
                @ site_operator(NUMBER_2, j + 1, n)
            )
    return h
