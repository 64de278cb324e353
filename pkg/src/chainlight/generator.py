"""Assembly of the linear generator of the expectation-value hierarchy.

For a chain of n atoms the Heisenberg equations of the 4**n - 1
product-operator expectation values close into the linear system

    dS/dt = Z S + source,

with Z sparse: a product label only couples to labels differing on the
sites touched by one Hamiltonian bond, one bath coupling or one loss
channel.  Every block of Z is obtained by expanding operator identities
of the local algebra, never hand-coded:

* bond blocks expand -i[O_a (x) O_b, H_bond] with H_bond contracted from
  the bond templates,
* bath, loss and drive blocks expand the corresponding single-site
  superoperators.

The all-identity label is eliminated during assembly: coefficients that
target it are routed into the constant source vector (the drive), and the
identity row is asserted empty rather than stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from numpy.typing import NDArray

from .medium import DriveSpec, LongRange, MediumSpec, NearestNeighbor
from .mpo import bond_mpo, pair_couplings
from .spinops import (
    LOCAL_BASIS,
    LOWER_2,
    NUMBER_2,
    RAISE_2,
    LabelIndexMap,
    expand_local,
    expand_operator,
)

#: Dense storage is used below this generator dimension.
DENSE_DIM = 5000

#: Default refusal threshold for the chain length.
N_CAP = 8


def _site_block(func) -> NDArray[np.complex128]:
    """4x4 transition block of a single-site superoperator.

    Row a holds the expansion of func(O_a) over the local basis; columns
    index the target digit.
    """
    block = np.zeros((4, 4), dtype=complex)
    for a in range(4):
        block[a] = expand_local(func(LOCAL_BASIS[a]))
    return block


def _comm(x: NDArray, y: NDArray) -> NDArray:
    return x @ y - y @ x


# Elementary single-site blocks.  Rates and the Rabi frequency multiply
# them at assembly time.
DECAY_BLOCK = _site_block(
    lambda o: RAISE_2 @ _comm(o, LOWER_2) - _comm(o, RAISE_2) @ LOWER_2
)
DEPHASE_BLOCK = _site_block(lambda o: _comm(NUMBER_2, _comm(o, NUMBER_2)))
DRIVE_BLOCK = _site_block(
    lambda o: -1j * (_comm(o, LOWER_2) + _comm(o, RAISE_2))
)
DETUNE_BLOCK = _site_block(lambda o: -1j * _comm(o, NUMBER_2))


def _pair_block(h_pair: NDArray) -> NDArray[np.complex128]:
    """16x16 transition block of -i[ . , h_pair] on a pair of sites.

    Row 4*a + b holds the expansion of -i[O_a (x) O_b, h_pair] over the
    two-site product basis.
    """
    block = np.zeros((16, 16), dtype=complex)
    for a in range(4):
        for b in range(4):
            op = np.kron(LOCAL_BASIS[a], LOCAL_BASIS[b])
            block[4 * a + b] = expand_operator(-1j * _comm(op, h_pair), 2)
    return block


def _embed_site(block: NDArray, site: int, n: int) -> sp.coo_matrix:
    """Embed a 4x4 block acting on one site (0-based) into 4**n."""
    left = sp.identity(4**site, dtype=complex, format="coo")
    right = sp.identity(4 ** (n - site - 1), dtype=complex, format="coo")
    return sp.kron(sp.kron(left, sp.coo_matrix(block)), right, format="coo")


def _embed_pair(block: NDArray, i: int, j: int, n: int) -> sp.coo_matrix:
    """Embed a 16x16 pair block acting on sites i < j (0-based)."""
    if not 0 <= i < j < n:
        raise ValueError(f"bad site pair ({i}, {j}) for n={n}")
    left = sp.identity(4**i, dtype=complex, format="coo")
    right = sp.identity(4 ** (n - j - 1), dtype=complex, format="coo")
    if j == i + 1:
        inner = sp.coo_matrix(block)
        return sp.kron(sp.kron(left, inner), right, format="coo")
    mid = sp.identity(4 ** (j - i - 1), dtype=complex, format="coo")
    tensor = block.reshape(4, 4, 4, 4)
    out = None
    for a in range(4):
        for a2 in range(4):
            slab = tensor[a, :, a2, :]
            if not np.any(slab):
                continue
            unit = sp.coo_matrix(
                (np.ones(1, dtype=complex), ([a], [a2])), shape=(4, 4)
            )
            term = sp.kron(
                sp.kron(sp.kron(sp.kron(left, unit), mid), sp.coo_matrix(slab)),
                right,
                format="coo",
            )
            out = term if out is None else out + term
    return out.tocoo()


@dataclass(frozen=True)
class Generator:
    """The assembled linear system dS/dt = Z S + source."""

    medium: MediumSpec
    drive: DriveSpec
    labels: LabelIndexMap
    z: object  # csr_matrix or ndarray, (dim, dim)
    source: NDArray[np.complex128]
    omega_l: float

    @property
    def n(self) -> int:
        return self.labels.n

    @property
    def dim(self) -> int:
        return self.labels.size

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.z)

    def as_dense(self) -> NDArray[np.complex128]:
        return self.z.toarray() if self.is_sparse else np.asarray(self.z)

    def as_sparse(self) -> sp.csr_matrix:
        return (
            self.z.tocsr() if self.is_sparse else sp.csr_matrix(self.z)
        )

    def rhs(self, s: NDArray) -> NDArray[np.complex128]:
        """Time derivative Z s + source."""
        return self.z @ s + self.source

    def residual(self, s: NDArray) -> float:
        """Steady-state defect ||Z s + source|| / ||source||."""
        norm = np.linalg.norm(self.source)
        if norm == 0.0:
            norm = 1.0
        return float(np.linalg.norm(self.rhs(s)) / norm)


@lru_cache(maxsize=64)
def _cached_pair_block(key: bytes) -> NDArray[np.complex128]:
    h_pair = np.frombuffer(key, dtype=complex).reshape(4, 4)
    return _pair_block(h_pair)


def assemble(
    medium: MediumSpec,
    drive: DriveSpec,
    n_cap: int = N_CAP,
    force_generic: bool = False,
) -> Generator:
    """Assemble the generator of a driven chain.

    Parameters
    ----------
    medium, drive:
        Chain and drive parameters.
    n_cap:
        Refuse chains longer than this (the variable count grows as
        4**n and n = 8 already carries 65535 variables).
    force_generic:
        Disable the cached-block fast path for homogeneous chains;
        the result must be identical, which the test suite checks.

    Returns
    -------
    Generator
        Z stored dense below dimension 5000, compressed sparse rows
        above.  The source vector carries +i Omega_L at the site-1 raise
        label and -i Omega_L at the site-1 lower label, and nothing else.
    """
    n = medium.n
    if n > n_cap:
        raise ValueError(
            f"refusing a chain of {n} atoms (cap {n_cap}): the generator "
            f"would have {4**n - 1} variables; raise n_cap explicitly to "
            "proceed"
        )
    omega_l = drive.omega_l(medium)
    terms: list[sp.coo_matrix] = []

    if isinstance(medium.coupling, NearestNeighbor):
        if n == 1:
            det = medium.detunings(drive.omega_p)
            terms.append(_embed_site(det[0] * DETUNE_BLOCK, 0, 1))
        else:
            templates = bond_mpo(medium, drive.omega_p)
            for i in range(n - 1):
                h_pair = templates.bond_hamiltonian(i)
                if force_generic:
                    block = _pair_block(h_pair)
                else:
                    block = _cached_pair_block(
                        np.ascontiguousarray(h_pair).tobytes()
                    )
                terms.append(_embed_pair(block, i, i + 1, n))
    elif isinstance(medium.coupling, LongRange):
        cx, cz = pair_couplings(medium, fitted=True)
        det = medium.detunings(drive.omega_p)
        for j in range(n):
            if det[j] != 0.0:
                terms.append(_embed_site(det[j] * DETUNE_BLOCK, j, n))
        hop = np.kron(RAISE_2, LOWER_2)
        hop = hop + hop.conj().T
        dens = np.kron(NUMBER_2, NUMBER_2)
        for i in range(n):
            for j in range(i + 1, n):
                h_pair = cx[i, j] * hop + cz[i, j] * dens
                if not np.any(h_pair):
                    continue
                if force_generic:
                    block = _pair_block(h_pair)
                else:
                    block = _cached_pair_block(
                        np.ascontiguousarray(h_pair).tobytes()
                    )
                terms.append(_embed_pair(block, i, j, n))
    else:
        raise TypeError(f"unknown coupling kind {medium.coupling!r}")

    for j in range(n):
        block = np.zeros((4, 4), dtype=complex)
        decay_rate = medium.gamma_gamma
        if j == 0:
            decay_rate += medium.gamma_l
        if j == n - 1:
            decay_rate += medium.gamma_r
        if decay_rate != 0.0:
            block += decay_rate * DECAY_BLOCK
        if medium.gamma_lambda != 0.0:
            block += medium.gamma_lambda * DEPHASE_BLOCK
        if j == 0 and omega_l != 0.0:
            block += omega_l * DRIVE_BLOCK
        if np.any(block):
            terms.append(_embed_site(block, j, n))

    dim_full = 4**n
    if terms:
        total = terms[0].tocsr()
        for term in terms[1:]:
            total = total + term.tocsr()
        total = total.tocoo()
        rows, cols, vals = total.row, total.col, total.data
    else:
        rows = np.empty(0, dtype=np.intp)
        cols = np.empty(0, dtype=np.intp)
        vals = np.empty(0, dtype=complex)

    on_identity_row = rows == 0
    if np.any(np.abs(vals[on_identity_row]) > 1e-12):
        raise AssertionError(
            "the all-identity label acquired dynamics; the local algebra "
            "expansion is inconsistent"
        )
    keep = ~on_identity_row
    rows, cols, vals = rows[keep], cols[keep], vals[keep]

    source = np.zeros(dim_full - 1, dtype=complex)
    to_source = cols == 0
    np.add.at(source, rows[to_source] - 1, vals[to_source])

    keep = ~to_source
    z = sp.csr_matrix(
        (vals[keep], (rows[keep] - 1, cols[keep] - 1)),
        shape=(dim_full - 1, dim_full - 1),
    )
    z.sum_duplicates()
    z.eliminate_zeros()
    if dim_full - 1 < DENSE_DIM:
        z = z.toarray()

    return Generator(
        medium=medium,
        drive=drive,
        labels=LabelIndexMap(n),
        z=z,
        source=source,
        omega_l=omega_l,
    )
