"""Steady states and transients of the expectation-value hierarchy."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla
from numpy.typing import NDArray
from scipy.integrate import solve_ivp
from scipy.linalg import lu_factor, lu_solve

from .generator import Generator
from .spinops import LabelIndexMap


class SingularGenerator(Exception):
    """The generator has no unique steady state (no dissipation path)."""


class SolverDivergence(Exception):
    """A solve finished without meeting its accuracy target."""


@dataclass(frozen=True)
class StateVector:
    """Expectation values of all product-operator labels at one time.

    ``time`` is ``math.inf`` for a steady state.
    """

    labels: LabelIndexMap
    values: NDArray[np.complex128]
    time: float

    def expectation(self, digits) -> complex:
        """Value of one label, e.g. (3, 0, 0) for the site-1 population."""
        return complex(self.values[self.labels.index(digits)])

    def conjugation_defect(self) -> float:
        """Largest violation of S[l*] = conj(S[l]); zero for physical states."""
        perm = self.labels.conjugate_permutation()
        return float(np.max(np.abs(np.conj(self.values)[perm] - self.values)))


@dataclass(frozen=True)
class Trajectory:
    """Time grid and state values of a transient solution."""

    labels: LabelIndexMap
    times: NDArray[np.float64]
    values: NDArray[np.complex128]  # shape (len(times), dim)

    def __len__(self) -> int:
        return len(self.times)

    def state(self, k: int) -> StateVector:
        return StateVector(
            labels=self.labels, values=self.values[k], time=float(self.times[k])
        )

    @property
    def final(self) -> StateVector:
        return self.state(len(self.times) - 1)


def _require_dissipation(gen: Generator) -> None:
    m = gen.medium
    if (
        m.gamma_l == 0.0
        and m.gamma_r == 0.0
        and m.gamma_lambda == 0.0
        and m.gamma_gamma == 0.0
    ):
        raise SingularGenerator(
            "every dissipation rate is zero; the dynamics is unitary and "
            "has no unique steady state"
        )


#: Below this dimension the dense factorization wins.
_DENSE_SOLVE_DIM = 2000
#: Between the dense cutoff and this one the sparse LU is cheap and exact;
#: above it the LU fill outgrows laptop-class memory and the Krylov
#: backend takes over (it solves the 65535-variable chain in seconds).
_DIRECT_SOLVE_DIM = 8192
#: Largest dimension at which the sparse LU remains an acceptable
#: fallback when the Krylov iteration stagnates.
_DIRECT_FALLBACK_DIM = 20000


def steady_state(
    gen: Generator,
    method: str = "auto",
    tol: float = 1e-10,
) -> StateVector:
    """Solve Z S = -source for the unique steady state.

    Parameters
    ----------
    gen:
        Assembled generator.
    method:
        "auto" picks a dense factorization for small systems, a sparse LU
        for intermediate ones and a Krylov iteration above, falling back
        where that is possible; "dense", "splu", "krylov" and "march"
        force the respective backend.  "march" integrates the transient
        until the derivative norm meets the target and is the backstop
        when memory rules out a factorization and the iteration stalls.
    tol:
        Acceptance threshold on ||Z S + source|| / ||source||.

    Raises
    ------
    SingularGenerator
        If no dissipation channel is open, or the factorization finds Z
        exactly singular.
    SolverDivergence
        If the computed solution misses the residual target.
    """
    _require_dissipation(gen)
    chain = [method]
    if method == "auto":
        if gen.dim < _DENSE_SOLVE_DIM:
            chain = ["dense"]
        elif gen.dim < _DIRECT_SOLVE_DIM:
            chain = ["splu"]
        elif gen.dim <= _DIRECT_FALLBACK_DIM:
            chain = ["krylov", "splu"]
        else:
            chain = ["krylov", "march"]

    rhs = -gen.source
    s = None
    failures: list[str] = []
    for backend in chain:
        try:
            if backend == "dense":
                s = lu_solve(lu_factor(gen.as_dense()), rhs)
            elif backend == "splu":
                s = spla.splu(gen.as_sparse().tocsc()).solve(rhs)
            elif backend == "krylov":
                s, info = spla.lgmres(
                    gen.as_sparse(),
                    rhs,
                    rtol=min(0.5 * tol, 1e-12),
                    atol=0.0,
                    maxiter=2000,
                    inner_m=40,
                )
                if info != 0:
                    raise SolverDivergence(f"lgmres stalled (info={info})")
            elif backend == "march":
                s = settle(gen, tol=tol)[0].values
            else:
                raise ValueError(f"unknown method {backend!r}")
        except RuntimeError as err:
            if "singular" in str(err).lower():
                raise SingularGenerator(str(err)) from err
            raise
        except (SolverDivergence, MemoryError) as err:
            failures.append(f"{backend}: {err}")
            s = None
            continue
        if gen.residual(s) <= tol:
            break
        failures.append(f"{backend}: residual {gen.residual(s):.3e}")
        s = None

    if s is None:
        raise SolverDivergence(
            "no backend met the residual target "
            f"{tol:.1e}: " + "; ".join(failures)
        )
    return StateVector(labels=gen.labels, values=s, time=math.inf)


def evolve(
    gen: Generator,
    t_end: float,
    dt_out: float | None = None,
    s0: NDArray | StateVector | None = None,
    method: str = "adaptive",
    rtol: float = 1e-9,
    atol: float = 1e-12,
) -> Trajectory:
    """Integrate dS/dt = Z S + source from the ground state (or ``s0``).

    ``method="adaptive"`` uses an embedded Runge-Kutta integrator with
    local tolerances (rtol, atol); ``method="expm"`` propagates with the
    exact relation S(t) = S_inf + e^{Zt}(S_0 - S_inf), which requires an
    invertible Z and is useful as an independent cross-check on small
    systems.

    With ``t_end=0`` the trajectory contains only the initial state.
    """
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    if isinstance(s0, StateVector):
        s0 = s0.values
    y0 = (
        np.zeros(gen.dim, dtype=complex)
        if s0 is None
        else np.asarray(s0, dtype=complex).copy()
    )
    if y0.shape != (gen.dim,):
        raise ValueError(f"initial state has shape {y0.shape}, need ({gen.dim},)")

    if t_end == 0.0:
        return Trajectory(
            labels=gen.labels,
            times=np.zeros(1),
            values=y0[None, :].copy(),
        )

    if dt_out is None:
        dt_out = t_end / 200.0
    n_out = max(1, int(math.ceil(t_end / dt_out - 1e-12)))
    times = np.linspace(0.0, t_end, n_out + 1)

    if method == "expm":
        s_inf = steady_state(gen).values
        shifted = spla.expm_multiply(
            gen.as_sparse(), y0 - s_inf, start=0.0, stop=t_end, num=n_out + 1
        )
        return Trajectory(
            labels=gen.labels, times=times, values=shifted + s_inf[None, :]
        )
    if method != "adaptive":
        raise ValueError(f"unknown method {method!r}")

    z = gen.z
    source = gen.source

    def rhs(_t: float, y: NDArray) -> NDArray:
        return z @ y + source

    sol = solve_ivp(
        rhs,
        (0.0, t_end),
        y0,
        method="DOP853",
        t_eval=times,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        reached = sol.t[-1] if len(sol.t) else 0.0
        raise SolverDivergence(
            f"time integration failed at t={reached:.6g}: {sol.message}"
        )
    return Trajectory(labels=gen.labels, times=sol.t, values=sol.y.T.copy())


def settle(
    gen: Generator,
    tol: float = 1e-10,
    t_max: float = 2e4,
    window: float = 100.0,
) -> tuple[StateVector, float]:
    """Integrate from the ground state until the residual target is met.

    Marches the transient in windows until the steady-state defect
    ``||Z S + source|| / ||source||`` drops below ``tol`` and returns the
    settled state with the time it took.  Slow but factorization-free;
    the backstop when neither a direct nor a Krylov solve is available.
    """
    t0 = 0.0
    y = np.zeros(gen.dim, dtype=complex)
    while t0 < t_max:
        traj = evolve(gen, window, dt_out=window, s0=y, rtol=1e-10, atol=1e-13)
        y = traj.values[-1]
        t0 += window
        if gen.residual(y) <= tol:
            return StateVector(labels=gen.labels, values=y, time=t0), t0
    raise SolverDivergence(
        f"residual still {gen.residual(y):.2e} after marching to t={t_max:g}"
    )


def state_defects(state: StateVector) -> dict[str, float]:
    """Physicality defects of a state, all zero in exact arithmetic.

    Returns the conjugation-pairing defect, the largest imaginary part of
    a pure-population label, the amount by which populations leave [0, 1],
    and the largest violation of the subset monotonicity of populations
    (adding a population factor can only lower the value).
    """
    labels = state.labels
    n = labels.n
    table = labels.digit_table()
    pure = np.all((table == 0) | (table == 3), axis=1)
    pure_idx = np.flatnonzero(pure)
    values = state.values[pure_idx]

    imag = float(np.max(np.abs(values.imag))) if len(values) else 0.0
    out_of_range = (
        float(np.max(np.maximum(values.real - 1.0, -values.real).clip(min=0.0)))
        if len(values)
        else 0.0
    )

    lookup = {tuple(table[i]): i for i in pure_idx}
    monotone = 0.0
    for i in pure_idx:
        digits = table[i]
        for site in range(n):
            if digits[site] != 3:
                continue
            parent = digits.copy()
            parent[site] = 0
            if not parent.any():
                parent_val = 1.0  # the identity expectation
            else:
                parent_val = state.values[lookup[tuple(parent)]].real
            monotone = max(monotone, state.values[i].real - parent_val)

    return {
        "conjugation": state.conjugation_defect(),
        "population_imag": imag,
        "population_range": out_of_range,
        "population_monotonic": monotone,
    }
