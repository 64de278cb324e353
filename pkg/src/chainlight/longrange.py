"""Sum-of-exponentials approximation of power-law coupling profiles.

A profile r**-u over integer distances r = 1..rmax is approximated by

    f(r) = sum_k gamma_k * delta_k**(r-1),        0 < delta_k < 1,

which is the form a matrix product operator of finite virtual dimension
can carry.  The fit minimises the plain sum of squared deviations

    F = sum_r (f(r) - r**-u)**2

with a damped Gauss-Newton (Levenberg-Marquardt) iteration on the
parameters (gamma_k, delta_k).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

_DELTA_MARGIN = 1e-9
_LAMBDA_INIT = 1e-3
_LAMBDA_MAX = 1e12
_MAX_ITER = 200


@dataclass(frozen=True)
class ExpFit:
    """Result of fitting ``sum_k gamma_k delta_k**(r-1)`` to ``r**-u``.

    Attributes
    ----------
    gammas, deltas:
        Fitted amplitudes and decay factors, sorted by decreasing delta.
        Every delta lies strictly inside (0, 1).
    u:
        Power-law exponent of the target profile.
    rmax:
        Largest distance entering the objective.
    residual:
        Final value of the sum-of-squares objective.
    converged:
        False when the iteration hit its step limit before stalling.
    """

    gammas: tuple[float, ...]
    deltas: tuple[float, ...]
    u: float
    rmax: int
    residual: float
    converged: bool

    @property
    def terms(self) -> int:
        return len(self.gammas)

    def value(self, r) -> float | NDArray[np.float64]:
        """Fitted profile at distance r (scalar or array, r >= 1)."""
        r = np.asarray(r, dtype=float)
        gammas = np.asarray(self.gammas)
        deltas = np.asarray(self.deltas)
        out = (gammas * deltas ** (r[..., None] - 1.0)).sum(axis=-1)
        return float(out) if out.ndim == 0 else out


def _design_matrix(deltas: NDArray, rmax: int) -> NDArray[np.float64]:
    r = np.arange(1, rmax + 1, dtype=float)
    return deltas[None, :] ** (r[:, None] - 1.0)


def _amplitudes_for(deltas: NDArray, target: NDArray) -> NDArray[np.float64]:
    """Best amplitudes at fixed decay factors (linear least squares)."""
    design = _design_matrix(deltas, target.size)
    gammas, *_ = np.linalg.lstsq(design, target, rcond=None)
    return gammas


def _residual(gammas: NDArray, deltas: NDArray, target: NDArray) -> NDArray:
    return _design_matrix(deltas, target.size) @ gammas - target


def _jacobian(gammas: NDArray, deltas: NDArray, rmax: int) -> NDArray:
    r = np.arange(1, rmax + 1, dtype=float)
    jac_gamma = deltas[None, :] ** (r[:, None] - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        jac_delta = gammas[None, :] * (r[:, None] - 1.0) * deltas[None, :] ** (
            r[:, None] - 2.0
        )
    jac_delta[0, :] = 0.0
    return np.hstack([jac_gamma, jac_delta])


def _levenberg_marquardt(
    gammas: NDArray, deltas: NDArray, target: NDArray
) -> tuple[NDArray, NDArray, float, bool]:
    rmax = target.size
    res = _residual(gammas, deltas, target)
    cost = float(res @ res)
    lam = _LAMBDA_INIT
    converged = False
    for _ in range(_MAX_ITER):
        jac = _jacobian(gammas, deltas, rmax)
        grad = jac.T @ res
        if np.max(np.abs(grad)) < 1e-14:
            converged = True
            break
        hess = jac.T @ jac
        scale = np.diag(hess).copy()
        scale[scale < 1e-30] = 1e-30
        accepted = False
        while lam <= _LAMBDA_MAX:
            try:
                step = np.linalg.solve(hess + lam * np.diag(scale), -grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial_gammas = gammas + step[: gammas.size]
            trial_deltas = np.clip(
                deltas + step[gammas.size :], _DELTA_MARGIN, 1.0 - _DELTA_MARGIN
            )
            trial_res = _residual(trial_gammas, trial_deltas, target)
            trial_cost = float(trial_res @ trial_res)
            if trial_cost < cost:
                rel_drop = (cost - trial_cost) / max(cost, 1e-300)
                gammas, deltas, res, cost = (
                    trial_gammas,
                    trial_deltas,
                    trial_res,
                    trial_cost,
                )
                lam = max(lam / 10.0, 1e-15)
                accepted = True
                if rel_drop < 1e-15 or cost < 1e-300:
                    converged = True
                break
            lam *= 10.0
        if not accepted or converged:
            converged = converged or not accepted
            break
    return gammas, deltas, cost, converged


def fit_powerlaw(u: float, terms: int, rmax: int) -> ExpFit:
    """Fit an L-term sum of exponentials to the profile r**-u.

    Parameters
    ----------
    u:
        Power-law exponent, non-negative.
    terms:
        Number L of exponentials.
    rmax:
        Number of distances r = 1..rmax entering the objective; must be at
        least L so the model cannot be underdetermined.

    Returns
    -------
    ExpFit
        Deterministic for fixed arguments.  Two starting points are tried,
        decay factors spread geometrically over (0.05, 0.95) and, for
        L > 1, the (L-1)-term fit extended by one extra channel; the
        latter guarantees the residual never increases with L.
    """
    if u < 0:
        raise ValueError("the power-law exponent must be non-negative")
    if terms < 1:
        raise ValueError("need at least one exponential term")
    if rmax < terms:
        raise ValueError(f"rmax={rmax} cannot support {terms} terms")

    r = np.arange(1, rmax + 1, dtype=float)
    target = r**-u

    starts: list[NDArray] = []
    if terms == 1:
        starts.append(np.array([0.5 * (0.05 + 0.95)]))
    else:
        starts.append(np.geomspace(0.05, 0.95, terms))
        smaller = fit_powerlaw(u, terms - 1, rmax)
        extra = float(np.exp(np.mean(np.log(smaller.deltas))))
        while any(abs(extra - d) < 1e-6 for d in smaller.deltas):
            extra *= 0.9
        starts.append(np.array(sorted(smaller.deltas + (extra,))))

    best: tuple[NDArray, NDArray, float, bool] | None = None
    for deltas0 in starts:
        deltas0 = np.clip(deltas0, _DELTA_MARGIN, 1.0 - _DELTA_MARGIN)
        gammas0 = _amplitudes_for(deltas0, target)
        fit = _levenberg_marquardt(gammas0, deltas0, target)
        if best is None or fit[2] < best[2]:
            best = fit
    gammas, deltas, cost, converged = best

    order = np.argsort(-deltas)
    return ExpFit(
        gammas=tuple(float(g) for g in gammas[order]),
        deltas=tuple(float(d) for d in deltas[order]),
        u=float(u),
        rmax=int(rmax),
        residual=cost,
        converged=converged,
    )
