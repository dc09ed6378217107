import math

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import simpson, trapezoid

from src.core.errors import RejectAsymmetricCauchy, RejectRange, RejectSubordinator, WrongRegime
from src.stable import (
    DensityTable,
    StableParams,
    char_exponent,
    density_f,
    density_f_derivative,
    density_table,
    levy_khintchine_exponent,
    make_grid,
    sample_X1,
    scale_density,
    stable_variates,
    survival_X1,
    tail_onset,
    validate_params,
)


# =============================================================================
# PARAMETERS
# =============================================================================

@pytest.mark.parametrize("alpha, c_plus, c_minus, error", [
    (2.0, 1.0, 1.0, RejectRange),
    (0.0, 1.0, 1.0, RejectRange),
    (1.5, -1.0, 1.0, RejectRange),
    (1.5, 0.0, 0.0, RejectRange),
    (float("nan"), 1.0, 1.0, RejectRange),
    (0.5, 1.0, 0.0, RejectSubordinator),
    (0.5, 0.0, 1.0, RejectSubordinator),
    (1.0, 1.0, 2.0, RejectAsymmetricCauchy),
])
def test_inadmissible_parameters_are_rejected(alpha, c_plus, c_minus, error):
    with pytest.raises(error):
        validate_params(alpha, c_plus, c_minus)


def test_derived_constants(cauchy, symmetric, spectrally_positive, spectrally_negative):
    assert cauchy.gamma == pytest.approx(1.0)
    assert cauchy.rho == pytest.approx(0.5)
    assert cauchy.tail_A == pytest.approx(1.0 / math.pi)
    assert symmetric.rho == pytest.approx(0.5)
    assert symmetric.eta == pytest.approx(2.0 / 3.0)
    assert spectrally_positive.rho == pytest.approx(1.0 / 3.0)
    assert spectrally_negative.rho == pytest.approx(1.0 / 1.75)
    assert spectrally_negative.alpha_rho == pytest.approx(1.0)


def test_reflection_swaps_intensities(spectrally_positive):
    reflected = spectrally_positive.reflected()
    assert (reflected.c_plus, reflected.c_minus) == (0.0, 1.0)
    assert reflected.rho == pytest.approx(1.0 - spectrally_positive.rho)


# =============================================================================
# CHARACTERISTIC EXPONENT
# =============================================================================

@pytest.mark.parametrize("alpha, c_plus, c_minus", [
    (0.7, 1.0, 0.5),
    (1.0, 0.5, 0.5),
    (1.5, 1.0, 1.0),
    (1.5, 1.0, 0.0),
    (1.8, 0.3, 1.2),
])
@pytest.mark.parametrize("theta", [-3.0, 0.5, 2.0])
def test_levy_khintchine_matches_closed_form(alpha, c_plus, c_minus, theta):
    params = StableParams(alpha, c_plus, c_minus)
    closed = char_exponent(params, theta)
    numeric = levy_khintchine_exponent(params, theta)
    assert abs(numeric - closed) <= 1e-8 * max(1.0, abs(closed))


def test_char_exponent_conjugate_symmetry(spectrally_positive):
    assert char_exponent(spectrally_positive, 0.0) == 0j
    assert char_exponent(spectrally_positive, -1.3) == char_exponent(spectrally_positive, 1.3).conjugate()


# =============================================================================
# DENSITY BY INVERSION
# =============================================================================

@pytest.mark.parametrize("x", [0.0, 0.1, 0.5, 1.0, 2.5, 7.0, 20.0, -3.0])
def test_cauchy_density_matches_closed_form(cauchy, x):
    assert density_f(cauchy, x) == pytest.approx(1.0 / (math.pi * (1.0 + x * x)), abs=1e-6)


@pytest.mark.parametrize("x", [0.0, 0.7, 3.0, -2.0])
def test_cauchy_survival(cauchy, x):
    assert survival_X1(cauchy, x) == pytest.approx(0.5 - math.atan(x) / math.pi, abs=1e-6)


def test_cauchy_derivatives(cauchy):
    assert density_f_derivative(cauchy, 1.0, 1) == pytest.approx(-1.0 / (2.0 * math.pi), abs=1e-6)
    assert density_f_derivative(cauchy, 0.0, 2) == pytest.approx(-2.0 / math.pi, abs=1e-6)


def test_derivative_order_is_checked(cauchy):
    with pytest.raises(ValueError):
        density_f_derivative(cauchy, 1.0, 3)


def test_reflection_of_density_and_derivative(spectrally_positive):
    reflected = spectrally_positive.reflected()
    assert density_f(spectrally_positive, -1.2) == pytest.approx(density_f(reflected, 1.2), rel=1e-9)
    assert density_f_derivative(spectrally_positive, -1.2, 1) == pytest.approx(
        -density_f_derivative(reflected, 1.2, 1), rel=1e-9
    )


def test_symmetric_density_is_even(symmetric):
    assert density_f(symmetric, -0.8) == pytest.approx(density_f(symmetric, 0.8), rel=1e-10)


def test_tail_constant_at_large_x(symmetric):
    ratio = 100.0 ** 2.5 * density_f(symmetric, 100.0)
    assert 0.95 <= ratio <= 1.05


@pytest.mark.parametrize("alpha", [1.2, 1.5])
def test_derivative_tail_constant_at_large_x(alpha):
    params = StableParams(alpha, 1.0, 1.0)
    # x^{alpha+2} f'(x) -> -(alpha+1) A
    scaled = 100.0 ** (alpha + 2.0) * density_f_derivative(params, 100.0, 1)
    assert scaled == pytest.approx(-(alpha + 1.0) * params.tail_A, rel=0.10)


@pytest.mark.slow
def test_density_integrates_to_one(symmetric):
    table = density_table(symmetric, make_grid(1e-3, 1e3, 801))
    log_x = np.log(table.grid)
    positive = simpson(table.values * table.grid, x=log_x)
    positive += density_f(symmetric, 0.0) * table.grid[0] + survival_X1(symmetric, table.grid[-1])
    # even density: the negative half carries the same mass
    assert 2.0 * positive == pytest.approx(1.0, abs=1e-4)
    assert table.mass <= 0.5 + 1e-4


def test_tail_derivative_sign(symmetric):
    assert density_f_derivative(symmetric, 50.0, 1) < 0.0
    assert density_f_derivative(symmetric, 50.0, 2) > 0.0


def test_density_integrates_to_survival(spectrally_positive):
    grid = np.linspace(1.0, 3.0, 201)
    values = [density_f(spectrally_positive, x) for x in grid]
    integral = trapezoid(values, grid)
    expected = survival_X1(spectrally_positive, 1.0) - survival_X1(spectrally_positive, 3.0)
    assert integral == pytest.approx(expected, rel=1e-4)


def test_tail_onset(symmetric, spectrally_negative):
    onset = tail_onset(symmetric)
    assert 1.0 <= onset < 1e4
    with pytest.raises(WrongRegime):
        tail_onset(spectrally_negative)


# =============================================================================
# SAMPLER
# =============================================================================

@pytest.mark.parametrize("fixture", ["symmetric", "spectrally_positive", "spectrally_negative"])
def test_sampler_positivity_matches_rho(request, fixture):
    params = request.getfixturevalue(fixture)
    rng = np.random.default_rng(7)
    draws = stable_variates(params, 200_000, rng)
    assert np.mean(draws > 0.0) == pytest.approx(params.rho, abs=0.006)


def test_single_draws_follow_the_stream(symmetric):
    draws = [sample_X1(symmetric, np.random.default_rng(5)) for _ in range(2)]
    assert isinstance(draws[0], float)
    assert draws[0] == draws[1]
    assert symmetric.is_symmetric


def test_cauchy_sampler_is_standard_cauchy(cauchy):
    draws = stable_variates(cauchy, 50_000, np.random.default_rng(11))
    assert stats.kstest(draws, "cauchy").pvalue > 1e-3


def test_sampler_matches_inverted_survival(spectrally_positive):
    draws = stable_variates(spectrally_positive, 200_000, np.random.default_rng(3))
    for x in (0.5, 2.0):
        assert np.mean(draws > x) == pytest.approx(survival_X1(spectrally_positive, x), abs=0.006)


def _ks_distance(params, draws, grid) -> float:
    """Largest gap between the empirical CDF and 1 - survival_X1 on a grid."""
    draws = np.sort(draws)
    empirical = np.searchsorted(draws, grid, side="right") / draws.size
    exact = np.array([1.0 - survival_X1(params, x) for x in grid])
    return float(np.max(np.abs(empirical - exact)))


@pytest.mark.slow
@pytest.mark.parametrize("fixture, bound", [
    ("symmetric", 0.002),
    ("spectrally_positive", 0.004),
    ("spectrally_negative", 0.004),
])
def test_sampler_matches_the_inversion_cdf(request, fixture, bound):
    params = request.getfixturevalue(fixture)
    draws = stable_variates(params, 1_000_000, np.random.default_rng(2024))
    grid = np.concatenate([-np.geomspace(20.0, 0.05, 30), [0.0], np.geomspace(0.05, 20.0, 30)])
    assert _ks_distance(params, draws, grid) < bound


# =============================================================================
# TABLES
# =============================================================================

def test_density_table_self_similarity(symmetric):
    grid = make_grid(0.1, 10.0, 9)
    at_eight = density_table(symmetric, grid, t=8.0)
    np.testing.assert_allclose(at_eight.grid, grid, rtol=1e-12)
    # 8^(2/3) = 4
    expected = [density_f(symmetric, x / 4.0) / 4.0 for x in grid]
    np.testing.assert_allclose(at_eight.values, expected, rtol=1e-9)
    assert at_eight.meta["horizon"] == pytest.approx(8.0)


def test_scale_density_identity_and_inverse(symmetric):
    table = density_table(symmetric, make_grid(0.1, 10.0, 5))
    assert scale_density(table, 1.0) is table
    back = scale_density(scale_density(table, 3.0), 1.0 / 3.0)
    np.testing.assert_allclose(back.grid, table.grid, rtol=1e-12)
    np.testing.assert_allclose(back.values, table.values, rtol=1e-12)


def test_scale_density_needs_eta():
    table = DensityTable([1.0, 2.0], [0.1, 0.1])
    with pytest.raises(ValueError):
        scale_density(table, 2.0)


@pytest.mark.parametrize("grid, values", [
    ([1.0, 1.0, 2.0], [0.1, 0.1, 0.1]),
    ([0.0, 1.0], [0.1, 0.1]),
    ([1.0, 2.0], [0.1, -0.1]),
    ([1.0, 2.0], [0.1]),
    ([1.0, 3.0], [1.0, 1.0]),
])
def test_density_table_rejects_bad_input(grid, values):
    with pytest.raises(ValueError):
        DensityTable(grid, values)


def test_density_table_is_read_only():
    table = DensityTable([1.0, 2.0], [0.2, 0.1], meta={"provenance": "analytic"})
    with pytest.raises(ValueError):
        table.values[0] = 1.0
    assert table.interpolate(1.5) == pytest.approx(0.15)
    assert table.interpolate(5.0) == 0.0
    assert list(table.to_frame("f").columns) == ["x", "f"]


def test_unnormalized_tables_skip_the_mass_check():
    table = DensityTable([1.0, 3.0], [1.0, 1.0], normalized=False)
    assert table.mass == pytest.approx(2.0)


def test_make_grid():
    np.testing.assert_allclose(make_grid(0.01, 100.0, 5), [0.01, 0.1, 1.0, 10.0, 100.0])
    np.testing.assert_allclose(make_grid(1.0, 2.0, 3, "linear"), [1.0, 1.5, 2.0])
    with pytest.raises(ValueError):
        make_grid(1.0, 0.5, 10)
    with pytest.raises(ValueError):
        make_grid(1.0, 2.0, 10, "cubic")
