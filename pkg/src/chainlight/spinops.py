"""Local two-level operators and the product-operator label space.

A chain of N two-level atoms is described in the Heisenberg picture by
expectation values of products of on-site operators drawn from the set

    { identity, sigma^dagger, sigma, sigma^dagger sigma }

with the ground state ordered first, so

    sigma = |g><e| = [[0, 1], [0, 0]],      n = sigma^dagger sigma = diag(0, 1).

A product operator is labelled by one digit per site,

    0 -> identity, 1 -> raise (sigma^dagger), 2 -> lower (sigma), 3 -> number,

with the site-1 digit most significant.  The all-identity label is excluded
from the dynamical variable space, so a chain of N atoms carries 4**N - 1
variables; the *generator index* of a label is its base-4 value minus one.

The operator set is a complete but non-orthogonal basis of the local 2x2
matrices, so expansion coefficients are read off through the dual transform
implemented by :func:`expand_local` rather than by a naive reshape.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np
from numpy.typing import NDArray


class LocalOp(IntEnum):
    """Digit values of the on-site operator alphabet."""

    IDENTITY = 0
    RAISE = 1
    LOWER = 2
    NUMBER = 3

    @property
    def matrix(self) -> NDArray[np.complex128]:
        return LOCAL_BASIS[self].copy()


IDENTITY_2 = np.eye(2, dtype=complex)
RAISE_2 = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
LOWER_2 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
NUMBER_2 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)

#: Stack of the four local operators indexed by digit value.
LOCAL_BASIS: NDArray[np.complex128] = np.stack(
    [IDENTITY_2, RAISE_2, LOWER_2, NUMBER_2]
)

# Dual transform mapping matrix-unit coordinates (M_gg, M_ge, M_eg, M_ee)
# of a local 2x2 matrix to coefficients over (identity, raise, lower, number).
# The basis is complete but not orthogonal: the identity and number operators
# overlap on the excited level, hence the -1 in the last row.
_DUAL = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 1.0],
    ],
    dtype=complex,
)

#: Digit substitution realising complex conjugation of a label.
CONJUGATE_DIGIT = np.array([0, 2, 1, 3])


def expand_local(mat: NDArray) -> NDArray[np.complex128]:
    """Expand a 2x2 matrix over (identity, raise, lower, number).

    Returns the unique coefficient vector c with
    ``mat = c[0]*I + c[1]*sigma^dagger + c[2]*sigma + c[3]*n``.
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {mat.shape}")
    return _DUAL @ mat.reshape(4)


def reconstruct_local(coeffs: NDArray) -> NDArray[np.complex128]:
    """Inverse of :func:`expand_local`."""
    coeffs = np.asarray(coeffs, dtype=complex)
    return np.tensordot(coeffs, LOCAL_BASIS, axes=(0, 0))


def label_to_index(digits) -> int:
    """Base-4 value of a digit tuple, site 1 most significant.

    The value indexes the *full* label space including the all-identity
    label at 0; subtract one for the generator index.
    """
    value = 0
    for d in digits:
        if not 0 <= int(d) <= 3:
            raise ValueError(f"digit {d} outside 0..3")
        value = 4 * value + int(d)
    return value


def index_to_label(value: int, n: int) -> tuple[int, ...]:
    """Digit tuple of a full-space index for an n-site chain."""
    if not 0 <= value < 4**n:
        raise ValueError(f"index {value} outside the {n}-site label space")
    digits = []
    for _ in range(n):
        digits.append(value % 4)
        value //= 4
    return tuple(reversed(digits))


def conjugate_label(digits) -> tuple[int, ...]:
    """Label of the Hermitian conjugate operator (swap raise and lower)."""
    return tuple(int(CONJUGATE_DIGIT[int(d)]) for d in digits)


@dataclass(frozen=True)
class LabelIndexMap:
    """Bijection between operator labels and generator indices.

    The generator acts on the 4**n - 1 non-identity labels; this map fixes
    the ordering once so every module indexes state vectors consistently.
    """

    n: int
    size: int = field(init=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need at least one site")
        object.__setattr__(self, "size", 4**self.n - 1)

    def index(self, digits) -> int:
        """Generator index of a label; the all-identity label is rejected."""
        digits = tuple(int(d) for d in digits)
        if len(digits) != self.n:
            raise ValueError(f"label {digits} does not have {self.n} digits")
        value = label_to_index(digits)
        if value == 0:
            raise ValueError("the all-identity label carries no variable")
        return value - 1

    def label(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise ValueError(f"index {index} outside 0..{self.size - 1}")
        return index_to_label(index + 1, self.n)

    def conjugate_permutation(self) -> NDArray[np.intp]:
        """Permutation P with ``P[i]`` the index of the conjugate of label i.

        The map is an involution; conjugation of the state vector is
        ``S.conj()[P]`` equalling S for any physical (Hermitian-consistent)
        state.
        """
        digits = self.digit_table()
        conj = CONJUGATE_DIGIT[digits]
        weights = 4 ** np.arange(self.n - 1, -1, -1, dtype=np.intp)
        return (conj @ weights) - 1

    def digit_table(self) -> NDArray[np.intp]:
        """Array of shape (size, n) with the digits of every label."""
        values = np.arange(1, 4**self.n, dtype=np.intp)
        table = np.empty((self.size, self.n), dtype=np.intp)
        for site in range(self.n - 1, -1, -1):
            table[:, site] = values % 4
            values //= 4
        return table

    def number_site_indices(self) -> NDArray[np.intp]:
        """Indices of the single-site excitation labels, site order.

        Entry j is the index of the label with digit 3 at site j+1 and
        identity elsewhere.
        """
        out = np.empty(self.n, dtype=np.intp)
        for site in range(self.n):
            digits = [0] * self.n
            digits[site] = LocalOp.NUMBER
            out[site] = self.index(digits)
        return out

    def drive_indices(self) -> tuple[int, int]:
        """Indices of the site-1 raise and lower labels."""
        raise_digits = [0] * self.n
        lower_digits = [0] * self.n
        raise_digits[0] = LocalOp.RAISE
        lower_digits[0] = LocalOp.LOWER
        return self.index(raise_digits), self.index(lower_digits)


def site_operator(op: NDArray, site: int, n: int) -> NDArray[np.complex128]:
    """Embed a 2x2 operator at ``site`` (1-based) in the full 2**n space."""
    if not 1 <= site <= n:
        raise ValueError(f"site {site} outside 1..{n}")
    out = np.eye(1, dtype=complex)
    for j in range(1, n + 1):
        out = np.kron(out, op if j == site else IDENTITY_2)
    return out


def product_operator(digits) -> NDArray[np.complex128]:
    """Dense 2**n matrix of a product-operator label."""
    out = np.eye(1, dtype=complex)
    for d in digits:
        out = np.kron(out, LOCAL_BASIS[int(d)])
    return out


def expand_operator(mat: NDArray, n: int) -> NDArray[np.complex128]:
    """Expand a 2**n matrix over the full product-operator basis.

    The coefficient vector has length 4**n and is ordered by
    :func:`label_to_index`; entry 0 multiplies the all-identity label.
    The expansion applies the local dual transform on every site of the
    matrix-unit tensor, so it is exact for any input matrix.
    """
    mat = np.asarray(mat, dtype=complex)
    dim = 2**n
    if mat.shape != (dim, dim):
        raise ValueError(f"expected shape {(dim, dim)}, got {mat.shape}")
    # Split row and column indices into per-site bits, then interleave to
    # (r1, c1, r2, c2, ...) so each site contributes one matrix-unit axis.
    tensor = mat.reshape((2,) * (2 * n))
    order = [axis for site in range(n) for axis in (site, n + site)]
    tensor = tensor.transpose(order).reshape((4,) * n)
    for site in range(n):
        tensor = np.tensordot(_DUAL, tensor, axes=(1, site))
        tensor = np.moveaxis(tensor, 0, site)
    return tensor.reshape(4**n)


def reconstruct_operator(coeffs: NDArray, n: int) -> NDArray[np.complex128]:
    """Inverse of :func:`expand_operator`."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (4**n,):
        raise ValueError(f"expected {4**n} coefficients, got {coeffs.shape}")
    tensor = coeffs.reshape((4,) * n)
    # Contract each label axis with the operator stack, building up the
    # (r1, c1, r2, c2, ...) tensor, then merge rows and columns.
    for site in range(n):
        tensor = np.tensordot(tensor, LOCAL_BASIS, axes=(0, 0))
    rows = [2 * site for site in range(n)]
    cols = [2 * site + 1 for site in range(n)]
    return tensor.transpose(rows + cols).reshape(2**n, 2**n)
