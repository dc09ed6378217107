import math
from dataclasses import replace

import numpy as np
import pytest
from scipy import special
from scipy.integrate import trapezoid

from src.core.errors import NonNormalizable, WrongRegime
from src.identities import (
    DensityFn,
    fit_edge_exponent,
    gauss_jacobi,
    jacobi_panel_integral,
    m_from_ptilde_beta,
    m_from_ptilde_z,
    m_table_from_ptilde,
    passage_density,
    passage_survival,
    passage_table,
    spectrally_negative_m,
    spectrally_negative_table,
)
from src.fluctuation import MCConfig, extrapolate_levels, simulate_meander_levels, simulate_supremum_levels
from src.fluctuation.extrapolate import MAX_BIAS_WEIGHT
from src.stable.density import density_f
from src.stable.tables import DensityTable, make_grid, scale_density
from src.stages.supremum import max_relative_deviation


def _pure_power_law(exponent: float, grid=None) -> DensityFn:
    """x^exponent on the whole half-line."""
    grid = make_grid(0.05, 50.0, 31) if grid is None else grid
    table = DensityTable(grid, grid ** exponent, normalized=False)
    return DensityFn(table, exponent, exponent)


def _smooth_meander(params, grid):
    """x^{alpha rho} near 0, x^{-(alpha+1)} at infinity, unit mass up to the grid."""
    values = grid ** params.alpha_rho / (1.0 + grid ** (params.alpha_rho + params.alpha + 1.0))
    table = DensityTable(grid, values, normalized=False)
    fn = DensityFn(table, params.alpha_rho, -(params.alpha + 1.0))
    return DensityFn(DensityTable(grid, values / fn.mass, normalized=False), params.alpha_rho, -(params.alpha + 1.0))


# =============================================================================
# QUADRATURE
# =============================================================================

def test_gauss_jacobi_nodes_are_cached_and_read_only():
    nodes, weights = gauss_jacobi(12, -0.5, -0.25)
    assert gauss_jacobi(12, -0.5, -0.25)[0] is nodes
    assert weights.sum() > 0.0
    with pytest.raises(ValueError):
        nodes[0] = 0.0


@pytest.mark.parametrize("a, b", [(-0.5, -0.5), (-0.25, -0.75), (0.3, -0.9), (0.0, 0.0)])
def test_jacobi_panels_integrate_the_beta_weight(a, b):
    value, abserr = jacobi_panel_integral(lambda s: np.ones_like(s), [0.3, 0.7], a, b)
    assert value == pytest.approx(special.beta(b + 1.0, a + 1.0), rel=1e-12)
    assert abserr < 1e-8


def test_jacobi_panels_with_a_kink():
    value, _ = jacobi_panel_integral(lambda s: np.abs(s - 0.4), [0.4], a=0.0, b=0.0)
    assert value == pytest.approx(0.5 * (0.4 ** 2 + 0.6 ** 2), rel=1e-12)


def test_jacobi_exponents_are_checked():
    with pytest.raises(ValueError):
        jacobi_panel_integral(np.cos, [], a=-1.0, b=0.0)


# =============================================================================
# DENSITY FUNCTION
# =============================================================================

def test_density_fn_reproduces_power_laws_exactly():
    fn = _pure_power_law(-2.5)
    x = np.array([0.01, 0.3, 1.7, 49.0, 400.0])
    np.testing.assert_allclose(fn(x), x ** -2.5, rtol=1e-12)
    assert fn(2.0) == pytest.approx(2.0 ** -2.5, rel=1e-12)


def test_density_fn_cdf_is_the_integral():
    grid = make_grid(0.1, 10.0, 21)
    fn = DensityFn(DensityTable(grid, np.exp(-grid), normalized=False), 0.0, -3.0)
    left, right = fn.tail_masses()
    assert left == pytest.approx(np.exp(-0.1) * 0.1)
    assert fn.cdf(10.0) == pytest.approx(fn.mass - right, rel=1e-12)
    assert fn.cdf(1e9) == pytest.approx(fn.mass, rel=1e-9)
    assert fn.cdf(0.0) == 0.0
    # piecewise power law between grid points
    assert fn.cdf(3.0) - fn.cdf(2.0) == pytest.approx(np.exp(-2.0) - np.exp(-3.0), rel=2e-2)


def test_density_fn_without_extensions_is_zero_outside():
    grid = make_grid(1.0, 2.0, 5)
    fn = DensityFn(DensityTable(grid, np.full(5, 0.5), normalized=False))
    assert fn(0.5) == 0.0 and fn(3.0) == 0.0
    assert fn.mass == pytest.approx(0.5)


def test_divergent_extension_is_not_normalizable():
    fn = _pure_power_law(-0.5)
    with pytest.raises(NonNormalizable):
        fn.tail_masses()


def test_edge_fits_fall_back_to_defaults(symmetric):
    grid = make_grid(0.01, 100.0, 41)
    clean = DensityTable(grid, grid ** 0.75 / (1.0 + grid ** 4.0), normalized=False)
    fn = DensityFn.for_ptilde(clean, symmetric)
    assert fn.flags["left_source"] == "fit"
    assert fn.left_exponent == pytest.approx(0.75, abs=1e-3)
    slope, stderr = fit_edge_exponent(grid, clean.values, "right")
    assert slope == pytest.approx(-3.25, abs=1e-3) and stderr < 1e-3

    noisy = np.random.default_rng(1).lognormal(0.0, 1.5, grid.size) * clean.values
    rough = DensityFn.for_ptilde(DensityTable(grid, noisy, normalized=False), symmetric)
    assert rough.flags["right_source"] == "default"
    assert rough.right_exponent == pytest.approx(-2.5)


# =============================================================================
# SUPREMUM FROM MEANDER
# =============================================================================

@pytest.mark.parametrize("fixture", ["symmetric", "spectrally_positive", "cauchy"])
@pytest.mark.parametrize("x", [0.2, 1.0, 5.0])
def test_power_law_meander_gives_rho_times_power_law(request, fixture, x):
    params = request.getfixturevalue(fixture)
    ptilde = _pure_power_law(-(params.alpha + 1.0))
    expected = params.rho * x ** -(params.alpha + 1.0)
    assert m_from_ptilde_beta(ptilde, params, x) == pytest.approx(expected, rel=1e-7)
    assert m_from_ptilde_z(ptilde, params, x) == pytest.approx(expected, rel=1e-7)


def test_general_power_law_meander(symmetric):
    k = 3.0
    ptilde = _pure_power_law(-k)
    rho = symmetric.rho
    factor = math.sin(rho * math.pi) / math.pi * special.beta((k - 1.0) / symmetric.alpha + rho, 1.0 - rho)
    assert m_from_ptilde_beta(ptilde, symmetric, 2.0) == pytest.approx(factor * 2.0 ** -k, rel=1e-7)


@pytest.mark.parametrize("x", [0.05, 0.5, 2.0, 20.0])
def test_both_quadratures_agree(spectrally_positive, x):
    ptilde = _smooth_meander(spectrally_positive, make_grid(0.01, 100.0, 60))
    beta = m_from_ptilde_beta(ptilde, spectrally_positive, x)
    z = m_from_ptilde_z(ptilde, spectrally_positive, x)
    assert beta == pytest.approx(z, rel=1e-6)


def test_convolution_preserves_mass(symmetric):
    ptilde = _smooth_meander(symmetric, make_grid(1e-3, 1e3, 80))
    grid = make_grid(1e-4, 1e4, 90)
    m = m_table_from_ptilde(ptilde, symmetric, grid)
    total = DensityFn.for_m(m, symmetric, fit_edges=False).mass
    assert total == pytest.approx(1.0, abs=0.02)
    assert m.meta["method"] == "beta"


def test_convolution_propagates_errbars(symmetric):
    grid = make_grid(0.1, 10.0, 15)
    values = grid ** 0.75 / (1.0 + grid ** 3.25)
    table = DensityTable(grid, values, 0.01 * values, meta={"level_bias": np.zeros(15)}, normalized=False)
    m = m_table_from_ptilde(DensityFn.for_ptilde(table, symmetric, fit_edges=False), symmetric, grid[3:8])
    assert m.errbars is not None
    np.testing.assert_allclose(m.errbars, 0.01 * m.values, rtol=1e-6)
    assert "level_bias" not in m.meta


def test_convolution_rejects_non_positive_x(symmetric):
    with pytest.raises(ValueError):
        m_from_ptilde_beta(_pure_power_law(-2.5), symmetric, 0.0)


# =============================================================================
# FIRST PASSAGE
# =============================================================================

def test_passage_density_self_similarity(symmetric):
    m = _smooth_meander(symmetric, make_grid(0.01, 100.0, 40))
    x, t, c = 1.5, 0.7, 3.0
    # h_{cx}(c^alpha t) = c^{-alpha} h_x(t)
    scaled = passage_density(m, symmetric, c * x, c ** symmetric.alpha * t)
    assert scaled == pytest.approx(c ** -symmetric.alpha * passage_density(m, symmetric, x, t), rel=1e-12)


def test_passage_survival_is_the_tail_of_the_density(symmetric):
    m = _smooth_meander(symmetric, make_grid(1e-3, 1e3, 80))
    x = 2.0
    times = np.geomspace(0.5, 4.0, 2001)
    h = np.array([passage_density(m, symmetric, x, t) for t in times])
    drop = passage_survival(m, symmetric, x, 0.5) - passage_survival(m, symmetric, x, 4.0)
    integral = float(np.sum(0.5 * (h[1:] + h[:-1]) * np.diff(times)))
    assert integral == pytest.approx(drop, rel=1e-4)


def test_passage_survival_accepts_tables(symmetric):
    grid = make_grid(0.01, 100.0, 40)
    m = _smooth_meander(symmetric, grid)
    from_table = passage_survival(m.table, symmetric, 1.0, 1.0)
    assert 0.0 < from_table <= 1.0


def test_passage_table_columns(symmetric):
    m = _smooth_meander(symmetric, make_grid(0.01, 100.0, 40))
    frame = passage_table(m, symmetric, 2.0, np.geomspace(0.1, 10.0, 7))
    assert list(frame.columns) == ["t", "density", "survival"]
    assert frame["survival"].is_monotonic_decreasing
    with pytest.raises(ValueError):
        passage_density(m, symmetric, -1.0, 1.0)


# =============================================================================
# SPECTRALLY NEGATIVE SUPREMUM
# =============================================================================

def test_exact_supremum_density_is_alpha_f(spectrally_negative):
    for x in (0.3, 1.0, 4.0):
        expected = spectrally_negative.alpha * density_f(spectrally_negative, x)
        assert spectrally_negative_m(spectrally_negative, x) == pytest.approx(expected, rel=1e-12)


def test_exact_supremum_density_has_unit_mass(spectrally_negative):
    table = spectrally_negative_table(spectrally_negative, make_grid(1e-3, 30.0, 120))
    fn = DensityFn.for_m(table, spectrally_negative, fit_edges=False)
    # alpha rho = 1: m(0+) is finite and the right tail is exponentially thin
    assert fn.left_exponent == pytest.approx(0.0)
    assert table.mass == pytest.approx(1.0, abs=5e-3)
    assert table.provenance == "analytic"


def test_exact_supremum_density_needs_c_plus_zero(symmetric):
    with pytest.raises(WrongRegime):
        spectrally_negative_m(symmetric, 1.0)
    with pytest.raises(WrongRegime):
        spectrally_negative_table(symmetric, [1.0, 2.0])


def test_passage_density_has_unit_mass(symmetric):
    m = _smooth_meander(symmetric, make_grid(1e-3, 1e3, 80))
    x = 2.0
    log_t = np.linspace(math.log(1e-9), math.log(1e15), 20001)
    t = np.exp(log_t)
    h = np.array([passage_density(m, symmetric, x, s) for s in t])
    assert trapezoid(h * t, log_t) == pytest.approx(1.0, abs=1e-3)


# =============================================================================
# SIMULATED TABLES
# =============================================================================

def _meander_table(params, cfg, grid):
    return extrapolate_levels(simulate_meander_levels(params, cfg), grid)


@pytest.mark.parametrize("fixture, horizon", [
    ("symmetric", 1.0),
    ("spectrally_positive", 1.0),
    ("symmetric", 3.0),
])
def test_both_quadratures_agree_on_simulated_meanders(request, small_mc, fixture, horizon):
    params = request.getfixturevalue(fixture)
    table = _meander_table(params, small_mc, make_grid(0.02, 20.0, 40))
    if horizon != 1.0:
        # same table moved along x by self-similarity
        table = scale_density(table, horizon)
    ptilde = DensityFn.for_ptilde(table, params)
    for x in make_grid(0.05, 10.0, 50):
        beta = m_from_ptilde_beta(ptilde, params, x)
        assert m_from_ptilde_z(ptilde, params, x) == pytest.approx(beta, rel=1e-6)


@pytest.mark.slow
def test_convolution_closes_the_loop_on_simulated_tables(symmetric):
    cfg = MCConfig(n_paths=300_000, n_steps=512, seed=20240229, levels=(128, 256, 512))
    grid = make_grid(0.02, 50.0, 80)
    m_table = extrapolate_levels(simulate_supremum_levels(symmetric, cfg), grid)
    ptilde_table = _meander_table(symmetric, replace(cfg, n_paths=30_000), grid)

    m_conv = m_table_from_ptilde(DensityFn.for_ptilde(ptilde_table, symmetric), symmetric, grid)
    deviation = max_relative_deviation(m_conv, m_table, (0.1, 10.0))
    fit = f"delta={m_table.meta.get('bias_delta')} fallback={m_table.meta.get('bias_fallback')}"
    assert deviation < 0.10, fit
    assert m_table.meta.get("bias_weight", 0.0) <= MAX_BIAS_WEIGHT


@pytest.mark.slow
def test_simulated_supremum_matches_alpha_f_without_positive_jumps(spectrally_negative):
    cfg = MCConfig(n_paths=1_000_000, n_steps=512, seed=7, levels=(128, 256, 512))
    grid = make_grid(0.05, 10.0, 80)
    m_table = extrapolate_levels(simulate_supremum_levels(spectrally_negative, cfg), grid)
    exact = spectrally_negative_table(spectrally_negative, grid)

    assert "bias_delta" in m_table.meta and "bias_fallback" in m_table.meta
    deviation = max_relative_deviation(m_table, exact, (0.1, 5.0))
    assert deviation < 0.05, (
        f"max relative deviation {deviation:.4f}, "
        f"delta={m_table.meta['bias_delta']:.4g} fallback={m_table.meta['bias_fallback']}"
    )
