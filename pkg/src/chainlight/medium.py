"""Chain and drive parameter containers.

Frequencies are quoted in units of the (typical) atomic transition frequency
and the group velocity of the waveguide defaults to one, matching the unit
system used throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class NearestNeighbor:
    """Couplings act only between adjacent sites."""


@dataclass(frozen=True)
class LongRange:
    """Power-law couplings, hop exponent ``alpha`` and density exponent ``beta``.

    The pairwise coupling over distance r is approximated by a sum of
    ``terms`` decaying exponentials fitted up to distance ``rmax``
    (default: chain length minus one).
    """

    alpha: float
    beta: float
    terms: int = 3
    rmax: int | None = None

    def __post_init__(self) -> None:
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("power-law exponents must be positive")
        if self.terms < 1:
            raise ValueError("need at least one exponential term")
        if self.rmax is not None and self.rmax < self.terms:
            raise ValueError("rmax must be at least the number of terms")


def rabi_from_intensity(i_in: float, gamma_l: float, v_g: float = 1.0) -> float:
    """Rabi frequency of the coherent input drive.

    Omega_L = sqrt(2 * Gamma_L * v_g * I_in), with I_in the photon flux of
    the input beam.
    """
    if i_in < 0:
        raise ValueError("input intensity must be non-negative")
    if gamma_l < 0:
        raise ValueError("bath coupling rate must be non-negative")
    return math.sqrt(2.0 * gamma_l * v_g * i_in)


def intensity_from_field(e_p: float, v_g: float = 1.0) -> float:
    """Photon flux of a coherent beam of field amplitude ``e_p``."""
    return e_p**2 / (2.0 * math.pi * v_g**2)


@dataclass(frozen=True)
class MediumSpec:
    """Atom chain with its couplings, bath rates and loss rates.

    Parameters
    ----------
    n:
        Number of atoms.
    omega:
        Transition frequencies, a scalar (uniform chain) or one value per
        site.
    jx, jz:
        Exchange and density-density coupling strengths.  Adjacent sites
        couple with 2*jx (hop) and 4*jz (density) in the Hamiltonian.
    gamma_l, gamma_r:
        Decay rates into the left and right waveguide baths.  They attach
        to the first and last atom only.
    gamma_lambda, gamma_gamma:
        Per-site dephasing and non-guided decay rates.
    coupling:
        NearestNeighbor() or a LongRange(...) descriptor.
    v_g:
        Waveguide group velocity.
    """

    n: int
    omega: float | tuple[float, ...] = 1.0
    jx: float = 0.05
    jz: float = 0.05
    gamma_l: float = 0.1
    gamma_r: float = 0.1
    gamma_lambda: float = 0.0
    gamma_gamma: float = 0.0
    coupling: NearestNeighbor | LongRange = field(default_factory=NearestNeighbor)
    v_g: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need at least one atom")
        omega = self.omega
        if isinstance(omega, (int, float)):
            omega = (float(omega),) * self.n
        else:
            omega = tuple(float(w) for w in omega)
            if len(omega) != self.n:
                raise ValueError(
                    f"got {len(omega)} frequencies for {self.n} sites"
                )
        object.__setattr__(self, "omega", omega)
        for name in ("gamma_l", "gamma_r", "gamma_lambda", "gamma_gamma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.v_g <= 0:
            raise ValueError("group velocity must be positive")

    @property
    def lossless(self) -> bool:
        return self.gamma_lambda == 0.0 and self.gamma_gamma == 0.0

    @property
    def homogeneous(self) -> bool:
        return len(set(self.omega)) == 1

    def detunings(self, omega_p: float) -> tuple[float, ...]:
        """Per-site detunings omega_j - omega_p in the rotating frame."""
        return tuple(w - omega_p for w in self.omega)


@dataclass(frozen=True)
class DriveSpec:
    """Coherent drive entering through the left bath.

    Exactly one of ``i_in`` (photon flux) and ``e_p`` (field amplitude) must
    determine the drive; giving both is accepted only when they agree.  The
    Rabi frequency also involves the bath rate of the driven side, so it is
    derived against a MediumSpec via :meth:`omega_l`.
    """

    omega_p: float
    i_in: float | None = None
    e_p: float | None = None
    side: str = "left"

    def __post_init__(self) -> None:
        if self.side != "left":
            raise NotImplementedError("only left-side drive is implemented")
        if self.i_in is None and self.e_p is None:
            raise ValueError("give one of i_in or e_p")
        if self.i_in is not None and self.i_in < 0:
            raise ValueError("input intensity must be non-negative")

    def intensity(self, v_g: float = 1.0) -> float:
        """Photon flux of the drive, derived from e_p when needed."""
        if self.i_in is None:
            return intensity_from_field(self.e_p, v_g)
        if self.e_p is not None:
            derived = intensity_from_field(self.e_p, v_g)
            if not math.isclose(self.i_in, derived, rel_tol=1e-6, abs_tol=1e-300):
                raise ValueError(
                    f"i_in={self.i_in} inconsistent with e_p={self.e_p} "
                    f"(implies {derived})"
                )
        return self.i_in

    def omega_l(self, medium: MediumSpec) -> float:
        """Rabi frequency against the left bath rate of ``medium``."""
        return rabi_from_intensity(
            self.intensity(medium.v_g), medium.gamma_l, medium.v_g
        )
