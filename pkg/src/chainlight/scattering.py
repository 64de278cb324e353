"""Exact single-photon scattering off the chain.

In the one-excitation sector the chain responds linearly and the
transmission and reflection amplitudes follow from an N-dimensional
solve.  The effective matrix is

        ( w_1 - w_p - i*G_L   2*Jx                            )
        ( 2*Jx                w_2 - w_p   2*Jx                )
    Z = (        .                .            .              )
        (             2*Jx    w_{N-1} - w_p   2*Jx            )
        (                     2*Jx    w_N - w_p - i*G_R       )

driven by (-sqrt(2 v_g G_L), 0, ..., 0); the photon momentum enters only
through w_p = v_g k.  Loss channels are outside this formalism: rates
gamma_lambda and gamma_gamma of the medium are ignored here.

For nearest-neighbour chains the solve is the standard O(N) tridiagonal
elimination; power-law couplings fill the matrix and use a dense solve.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .medium import LongRange, MediumSpec, NearestNeighbor


@dataclass(frozen=True)
class ScatterResult:
    """Amplitudes of one scattering solve at a fixed probe frequency."""

    omega_p: float
    t: complex
    r: complex
    excitation: NDArray[np.complex128]  # per-site amplitudes

    @property
    def transmittance(self) -> float:
        return abs(self.t) ** 2

    @property
    def reflectance(self) -> float:
        return abs(self.r) ** 2


def _tridiag_solve(
    diag: NDArray, off: complex, rhs: NDArray
) -> NDArray[np.complex128]:
    """Thomas elimination for a symmetric tridiagonal system.

    The plain forward sweep is safe here: a vanishing pivot requires a
    fully closed chain (both end couplings zero) hitting a real
    eigenvalue, which is rejected with a clear error.
    """
    n = diag.size
    d = diag.astype(complex).copy()
    y = rhs.astype(complex).copy()
    for k in range(1, n):
        if d[k - 1] == 0:
            raise ValueError(
                "singular scattering matrix (closed chain at a bound "
                "resonance); open a waveguide coupling"
            )
        w = off / d[k - 1]
        d[k] -= w * off
        y[k] -= w * y[k - 1]
    if d[n - 1] == 0:
        raise ValueError(
            "singular scattering matrix (closed chain at a bound "
            "resonance); open a waveguide coupling"
        )
    x = np.empty(n, dtype=complex)
    x[n - 1] = y[n - 1] / d[n - 1]
    for k in range(n - 2, -1, -1):
        x[k] = (y[k] - off * x[k + 1]) / d[k]
    return x


def single_photon(medium: MediumSpec, omega_p: float) -> ScatterResult:
    """Transmission and reflection amplitudes of a single photon.

    Solves the one-excitation linear system at probe frequency
    ``omega_p`` and forms

        t = -i sqrt(2 G_R / v_g) e_N,
        r = 1 - i sqrt(2 G_L / v_g) e_1.

    For a lossless medium |t|**2 + |r|**2 = 1 at every frequency.
    """
    n = medium.n
    v_g = medium.v_g
    diag = np.array(medium.detunings(omega_p), dtype=complex)
    diag[0] -= 1j * medium.gamma_l
    diag[n - 1] -= 1j * medium.gamma_r
    rhs = np.zeros(n, dtype=complex)
    rhs[0] = -cmath.sqrt(2.0 * v_g * medium.gamma_l)

    if isinstance(medium.coupling, NearestNeighbor) or n == 1:
        e = _tridiag_solve(diag, 2.0 * medium.jx, rhs)
    elif isinstance(medium.coupling, LongRange):
        z = np.diag(diag)
        for i in range(n):
            for j in range(i + 1, n):
                z[i, j] = z[j, i] = 2.0 * medium.jx * float(j - i) ** (
                    -medium.coupling.alpha
                )
        e = np.linalg.solve(z, rhs)
    else:
        raise TypeError(f"unknown coupling kind {medium.coupling!r}")

    t = -1j * cmath.sqrt(2.0 * medium.gamma_r / v_g) * e[n - 1]
    r = 1.0 - 1j * cmath.sqrt(2.0 * medium.gamma_l / v_g) * e[0]
    return ScatterResult(omega_p=omega_p, t=complex(t), r=complex(r), excitation=e)


def scan(medium: MediumSpec, omega_grid: NDArray) -> list[ScatterResult]:
    """Scattering solve over a probe-frequency grid."""
    return [single_photon(medium, float(w)) for w in omega_grid]


def t2_analytic(medium: MediumSpec, omega_p: float) -> complex:
    """Closed-form transmission amplitude of a two-atom chain.

    t_2 = -4 i Jx sqrt(G_L G_R) /
          [(w_p - w_1 + i G_L)(w_p - w_2 + i G_R) - 4 Jx**2]
    """
    if medium.n != 2:
        raise ValueError("the closed form covers exactly two atoms")
    if not isinstance(medium.coupling, NearestNeighbor):
        raise ValueError("the closed form covers nearest-neighbour coupling")
    w1, w2 = medium.omega
    gl, gr = medium.gamma_l, medium.gamma_r
    denom = (omega_p - w1 + 1j * gl) * (omega_p - w2 + 1j * gr) - 4.0 * medium.jx**2
    return -4j * medium.jx * cmath.sqrt(gl * gr) / denom
