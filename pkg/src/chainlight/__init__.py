"""Driven-dissipative light transport through a chain of two-level atoms.

The package builds the closed linear system obeyed by all product-operator
expectation values of the chain (4**n - 1 variables for n atoms), solves
its steady states and transients, and derives transport quantities:
transmission, reflection, excitation profiles and their scaling with chain
length.  Exact single-photon scattering and sum-of-exponentials handling
of power-law couplings round out the toolbox.
"""

from importlib.metadata import PackageNotFoundError, version

from .dynamics import (
    SingularGenerator,
    SolverDivergence,
    StateVector,
    Trajectory,
    evolve,
    settle,
    state_defects,
    steady_state,
)
from .generator import Generator, assemble
from .longrange import ExpFit, fit_powerlaw
from .medium import (
    DriveSpec,
    LongRange,
    MediumSpec,
    NearestNeighbor,
    intensity_from_field,
    rabi_from_intensity,
)
from .mpo import BondMpo, LongRangeMpo, bond_mpo, longrange_mpo, total_hamiltonian
from .observables import (
    ScalingFit,
    TransportPoint,
    equal_time_correlation,
    excitation_profile,
    reflection,
    scaling_exponent,
    transmission,
)
from .reference import brute_force_generator, two_atom_reference
from .scattering import ScatterResult, scan, single_photon, t2_analytic
from .spinops import LabelIndexMap, LocalOp

try:
    __version__ = version("chainlight")
except PackageNotFoundError:  # running from a checkout
    __version__ = "0.0.0+local"

__all__ = [
    "BondMpo",
    "DriveSpec",
    "ExpFit",
    "Generator",
    "LabelIndexMap",
    "LocalOp",
    "LongRange",
    "LongRangeMpo",
    "MediumSpec",
    "NearestNeighbor",
    "ScalingFit",
    "ScatterResult",
    "SingularGenerator",
    "SolverDivergence",
    "StateVector",
    "TransportPoint",
    "Trajectory",
    "assemble",
    "bond_mpo",
    "brute_force_generator",
    "equal_time_correlation",
    "evolve",
    "excitation_profile",
    "fit_powerlaw",
    "intensity_from_field",
    "longrange_mpo",
    "rabi_from_intensity",
    "reflection",
    "scaling_exponent",
    "scan",
    "settle",
    "single_photon",
    "state_defects",
    "steady_state",
    "t2_analytic",
    "total_hamiltonian",
    "transmission",
    "two_atom_reference",
]
