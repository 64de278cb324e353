"""Sum-of-exponentials approximation of power-law tails."""

import numpy as np
import pytest

from chainlight import fit_powerlaw


def _target(u, rmax):
    r = np.arange(1, rmax + 1, dtype=float)
    return r**-u


def test_single_term_is_reasonable():
    fit = fit_powerlaw(2.0, 1, 8)
    assert fit.terms == 1
    assert 0.0 < fit.deltas[0] < 1.0
    # one exponential cannot be perfect but must capture the r=1 value well
    assert fit.value(1) == pytest.approx(1.0, abs=0.2)


def test_fit_accuracy_improves_to_good():
    fit = fit_powerlaw(2.0, 3, 10)
    vals = fit.value(np.arange(1, 11))
    np.testing.assert_allclose(vals, _target(2.0, 10), atol=2e-3)


def test_residual_nonincreasing_in_terms():
    for u in (1.0, 2.0, 3.0):
        residuals = [fit_powerlaw(u, terms, 10).residual for terms in (1, 2, 3, 4)]
        for a, b in zip(residuals, residuals[1:]):
            assert b <= a + 1e-15


def test_deltas_sorted_descending():
    fit = fit_powerlaw(1.5, 3, 12)
    assert all(a >= b for a, b in zip(fit.deltas, fit.deltas[1:]))
    assert all(0.0 < d < 1.0 for d in fit.deltas)


def test_value_matches_explicit_sum():
    fit = fit_powerlaw(2.5, 2, 9)
    r = 4
    explicit = sum(
        g * d ** (r - 1) for g, d in zip(fit.gammas, fit.deltas)
    )
    assert fit.value(r) == pytest.approx(explicit, rel=1e-12)
    # vectorised evaluation agrees with scalar calls
    rs = np.array([1, 3, 7])
    np.testing.assert_allclose(
        fit.value(rs), [fit.value(int(k)) for k in rs], rtol=1e-12
    )


def test_steep_tail_is_nearly_nearest_neighbour():
    fit = fit_powerlaw(20.0, 1, 3)
    assert fit.value(1) == pytest.approx(1.0, abs=1e-5)
    assert abs(fit.value(2)) < 1e-5


def test_fit_is_deterministic():
    a = fit_powerlaw(1.7, 3, 11)
    b = fit_powerlaw(1.7, 3, 11)
    np.testing.assert_array_equal(a.gammas, b.gammas)
    np.testing.assert_array_equal(a.deltas, b.deltas)


def test_rejects_underdetermined_setups():
    with pytest.raises(ValueError):
        fit_powerlaw(2.0, 5, 3)  # more exponentials than distances
