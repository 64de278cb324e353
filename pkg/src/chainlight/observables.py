"""Transport coefficients and derived quantities of chain states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .dynamics import StateVector
from .medium import DriveSpec, MediumSpec


def _flux(medium: MediumSpec, drive: DriveSpec) -> float:
    i_in = drive.intensity(medium.v_g)
    if i_in <= 0.0:
        raise ValueError("transport coefficients need a nonzero input flux")
    return medium.v_g * i_in


def transmission(state: StateVector, medium: MediumSpec, drive: DriveSpec) -> float:
    """Transmitted flux over input flux, 2 G_R <n_N> / (v_g I_in)."""
    digits = [0] * medium.n
    digits[-1] = 3
    n_last = state.expectation(digits).real
    return 2.0 * medium.gamma_r * n_last / _flux(medium, drive)


def reflection(state: StateVector, medium: MediumSpec, drive: DriveSpec) -> float:
    """Reflected flux over input flux.

    The reflected beam interferes with the drive, so the coefficient
    mixes the coherence of the first atom with its population:
    1 + 2 Omega_L Im<sig_1> / (v_g I_in) + 2 G_L <n_1> / (v_g I_in).
    """
    flux = _flux(medium, drive)
    omega_l = drive.omega_l(medium)
    digits_s = [0] * medium.n
    digits_s[0] = 2
    digits_n = [0] * medium.n
    digits_n[0] = 3
    coherence = state.expectation(digits_s)
    population = state.expectation(digits_n).real
    return (
        1.0
        + 2.0 * omega_l * coherence.imag / flux
        + 2.0 * medium.gamma_l * population / flux
    )


def excitation_profile(state: StateVector) -> NDArray[np.float64]:
    """Per-site populations <n_j>, j = 1..n."""
    idx = state.labels.number_site_indices()
    return state.values[idx].real.copy()


def equal_time_correlation(state: StateVector, sites) -> float:
    """Joint population <n_{j1} ... n_{jk}> of a set of distinct sites."""
    sites = sorted(int(s) for s in sites)
    if len(set(sites)) != len(sites):
        raise ValueError("sites must be distinct")
    digits = [0] * state.labels.n
    for s in sites:
        if not 1 <= s <= state.labels.n:
            raise ValueError(f"site {s} outside 1..{state.labels.n}")
        digits[s - 1] = 3
    return state.expectation(digits).real


@dataclass(frozen=True)
class TransportPoint:
    """Transport coefficients of one steady-state solve."""

    omega_p: float
    i_in: float
    transmission: float
    reflection: float


@dataclass(frozen=True)
class ScalingFit:
    """Power-law fit T ~ N**-kappa over a set of chain lengths."""

    kappa: float
    intercept: float
    r_squared: float
    lengths: tuple[int, ...]
    transmissions: tuple[float, ...]


def scaling_exponent(lengths, transmissions) -> ScalingFit:
    """Least-squares exponent of log T against log N.

    kappa is minus the slope, so ballistic transport gives kappa = 0 and
    decaying transport gives kappa > 0.
    """
    lengths = np.asarray(lengths, dtype=float)
    transmissions = np.asarray(transmissions, dtype=float)
    if lengths.size != transmissions.size or lengths.size < 2:
        raise ValueError("need at least two (length, transmission) pairs")
    if np.any(transmissions <= 0.0):
        raise ValueError("transmissions must be positive for a log fit")
    x = np.log(lengths)
    y = np.log(transmissions)
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if ss_tot < 1e-30 else 1.0 - ss_res / ss_tot
    return ScalingFit(
        kappa=float(-slope),
        intercept=float(intercept),
        r_squared=float(r_squared),
        lengths=tuple(int(round(l)) for l in lengths),
        transmissions=tuple(float(t) for t in transmissions),
    )
