"""
Marginal Density by Fourier Inversion
=====================================

f, f', f'' and P(X_1 > x) from the characteristic exponent

    psi(theta) = -gamma |theta|^alpha (1 - i zeta sgn theta)

With a = exp(-gamma theta^alpha), u = zeta gamma theta^alpha and the phase
phi = u - theta x, every quantity is a half-line integral:

    f(x)        =  1/pi  int a cos(phi)
    f'(x)       =  1/pi  int theta a sin(phi)
    f''(x)      = -1/pi  int theta^2 a cos(phi)
    P(X_1 > x)  =  1/2 + 1/pi int a sin(phi) / theta

QUADRATURE PLAN:
----------------

1. Cut-off Theta: the tail int_Theta^inf theta^k a dtheta is an incomplete
   gamma function; Theta is where it drops below pi * TRUNCATION_TOL.
2. First panel [0, min(Theta, pi/x)]: plain adaptive quadrature. For
   alpha < 1 it runs in v = theta^alpha so the integrand is smooth at 0.
3. Remaining panels of at most PERIODS_PER_PANEL periods of cos(theta x):
   Fourier-weighted quadrature (QUADPACK QAWO) on the split integrand
       cos(phi) = cos u cos(theta x) + sin u sin(theta x)
       sin(phi) = sin u cos(theta x) - cos u sin(theta x)

Negative x goes through the reflection (alpha, c_plus, c_minus, x) ->
(alpha, c_minus, c_plus, -x).
"""
import logging
import math
from typing import Callable, Tuple

import numpy as np
from scipy import integrate, optimize, special

from config.settings import SETTINGS

from ..core.errors import NumericalError, QuadratureFailure, WrongRegime
from .params import StableParams
from .tables import QUADRATURE, DensityTable, scale_density

logger = logging.getLogger(__name__)

PERIODS_PER_PANEL = 16

# Negative inversion noise above this is clamped silently
CLAMP_SILENT = -1e-10

# Integrand kinds: (theta power k for the cut-off, overall sign)
KINDS = {
    "f": (0, 1.0),
    "d1": (1, 1.0),
    "d2": (2, -1.0),
    "survival": (0, 1.0),
}


# =============================================================================
# CUT-OFF
# =============================================================================

def _tail_constant(params: StableParams, k: int) -> Tuple[float, float]:
    shape = (k + 1) / params.alpha
    scale = math.gamma(shape) * params.gamma ** (-shape) / params.alpha
    return shape, scale


def _tail_bound(params: StableParams, theta: float, k: int) -> float:
    """Upper bound of int_theta^inf t^k exp(-gamma t^alpha) dt."""
    shape, scale = _tail_constant(params, k)
    return scale * special.gammaincc(shape, params.gamma * theta ** params.alpha)


def _cutoff_moment(params: StableParams, k: int, target: float) -> float:
    shape, scale = _tail_constant(params, k)
    if target >= scale:
        return 0.0
    s = special.gammainccinv(shape, target / scale)
    return float((s / params.gamma) ** params.eta)


def inversion_cutoff(params: StableParams, kind: str = "f", tol: float = None) -> float:
    """
    Truncation point Theta of the inversion integral.

    The dropped tail is bounded by pi * tol, so the truncation error of the
    returned quantity is below tol.
    """
    tol = SETTINGS.TRUNCATION_TOL if tol is None else tol
    k, _ = KINDS[kind]
    target = math.pi * tol
    theta = _cutoff_moment(params, k, target)
    if kind != "survival" or theta >= 1.0:
        return max(theta, 1e-12)

    # Survival integrand carries 1/theta: bound the tail by bound_0(Theta)/Theta
    lower = max(theta, 1e-12)
    upper = max(_cutoff_moment(params, 0, target * lower), lower)

    def excess(t):
        return _tail_bound(params, t, 0) / t - target

    if excess(upper) >= 0.0 or excess(lower) <= 0.0:
        return upper
    return float(optimize.brentq(excess, lower, upper, xtol=1e-12))


# =============================================================================
# INTEGRANDS
# =============================================================================

def _amplitude_phase(params: StableParams, theta):
    power = params.gamma * theta ** params.alpha
    return np.exp(-power), params.zeta * power


def _full_integrand(params: StableParams, x: float, kind: str) -> Callable:
    def integrand(theta):
        a, u = _amplitude_phase(params, theta)
        phase = u - theta * x
        if kind == "f":
            return a * math.cos(phase)
        if kind == "d1":
            return theta * a * math.sin(phase)
        if kind == "d2":
            return -theta * theta * a * math.cos(phase)
        return a * math.sin(phase) / theta

    return integrand


def _split_integrands(params: StableParams, kind: str) -> Tuple[Callable, Callable]:
    """(g_cos, g_sin) with integrand = g_cos cos(theta x) + g_sin sin(theta x)."""

    def parts(theta):
        a, u = _amplitude_phase(params, theta)
        return a * math.cos(u), a * math.sin(u)

    if kind == "f":
        return (lambda t: parts(t)[0]), (lambda t: parts(t)[1])
    if kind == "d1":
        return (lambda t: t * parts(t)[1]), (lambda t: -t * parts(t)[0])
    if kind == "d2":
        return (lambda t: -t * t * parts(t)[0]), (lambda t: -t * t * parts(t)[1])
    return (lambda t: parts(t)[1] / t), (lambda t: -parts(t)[0] / t)


# =============================================================================
# INVERSION
# =============================================================================

def _quad(func, a, b, **kwargs) -> Tuple[float, float]:
    value, abserr = integrate.quad(func, a, b, limit=200, **kwargs)[:2]
    return value, abserr


def _invert(params: StableParams, x: float, kind: str) -> Tuple[float, float]:
    """Raw integral for x >= 0, returned as (value, abserr) before 1/pi."""
    theta_max = inversion_cutoff(params, kind)
    opts = dict(epsabs=1e-13, epsrel=1e-11)
    full = _full_integrand(params, x, kind)

    first = theta_max if x == 0.0 else min(theta_max, math.pi / x)
    if params.alpha < 1.0:
        eta = params.eta

        def in_v(v):
            theta = v ** eta
            return full(theta) * eta * v ** (eta - 1.0)

        value, abserr = _quad(in_v, 0.0, first ** params.alpha, **opts)
    else:
        value, abserr = _quad(full, 0.0, first, **opts)

    if first >= theta_max:
        return value, abserr

    g_cos, g_sin = _split_integrands(params, kind)
    width = PERIODS_PER_PANEL * 2.0 * math.pi / x
    edges = np.append(np.arange(first, theta_max, width), theta_max)
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo <= 0.0:
            continue
        c_val, c_err = _quad(g_cos, lo, hi, weight="cos", wvar=x, **opts)
        s_val, s_err = _quad(g_sin, lo, hi, weight="sin", wvar=x, **opts)
        value += c_val + s_val
        abserr += c_err + s_err
    return value, abserr


def _evaluate(params: StableParams, x: float, kind: str) -> Tuple[float, float]:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x!r}")
    if x < 0.0:
        value, abserr = _evaluate(params.reflected(), -x, kind)
        # f and f'' are even under reflection, f' is odd, P(X > x) = 1 - P(-X > -x)
        if kind == "d1":
            return -value, abserr
        if kind == "survival":
            return 1.0 - value, abserr
        return value, abserr

    raw, abserr = _invert(params, x, kind)
    value = raw / math.pi
    abserr = abserr / math.pi
    if kind == "survival":
        value += 0.5

    tol = SETTINGS.QUAD_TOL
    if abserr > tol and abserr > tol * abs(value):
        raise QuadratureFailure(
            f"inversion of {kind} at x={x:g} reached abserr {abserr:.3g} > {tol:g}"
        )
    return value, abserr


def _clamp(value: float, what: str, x: float, lower: float = 0.0, upper: float = None) -> float:
    if value < lower:
        if value - lower < CLAMP_SILENT:
            logger.warning("%s(%g) = %.3g below %g, clamped", what, x, value, lower)
        return lower
    if upper is not None and value > upper:
        if value - upper > -CLAMP_SILENT:
            logger.warning("%s(%g) = %.3g above %g, clamped", what, x, value, upper)
        return upper
    return value


# =============================================================================
# PUBLIC API
# =============================================================================

def density_f(params: StableParams, x: float) -> float:
    """
    Density of X_1 at x.

    Raises:
        QuadratureFailure: the inversion missed SETTINGS.QUAD_TOL
    """
    value, _ = _evaluate(params, x, "f")
    return _clamp(value, "f", x)


def density_f_with_error(params: StableParams, x: float) -> Tuple[float, float]:
    value, abserr = _evaluate(params, x, "f")
    return _clamp(value, "f", x), abserr


def density_f_derivative(params: StableParams, x: float, k: int) -> float:
    """k-th derivative of f (k = 1 or 2) by inversion with a theta^k weight."""
    if k not in (1, 2):
        raise ValueError(f"derivative order must be 1 or 2, got {k!r}")
    value, _ = _evaluate(params, x, "d1" if k == 1 else "d2")
    return value


def survival_X1(params: StableParams, x: float) -> float:
    """P(X_1 > x) by Gil-Pelaez inversion."""
    value, _ = _evaluate(params, x, "survival")
    return _clamp(value, "P(X_1 > x)", x, upper=1.0)


def density_table(params: StableParams, grid, t: float = 1.0) -> DensityTable:
    """
    Tabulate f_t on a positive grid.

    For t != 1 the time-1 density is tabulated on grid * t^{-eta} and carried
    to time t by self-similarity, so the result lives on the requested grid.
    """
    grid = np.asarray(grid, dtype=float)
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t!r}")
    base_grid = grid * t ** (-params.eta)

    values = np.empty_like(base_grid)
    errors = np.empty_like(base_grid)
    for i, x in enumerate(base_grid):
        values[i], errors[i] = density_f_with_error(params, x)

    meta = {
        "provenance": QUADRATURE,
        "quantity": "f",
        "eta": params.eta,
        "horizon": 1.0,
        **params.as_dict(),
    }
    table = DensityTable(base_grid, values, errors, meta, normalized=True)
    return scale_density(table, t)


def derivative_values(params: StableParams, grid, k: int) -> np.ndarray:
    """f^(k) on a grid; signed, so not a DensityTable."""
    return np.array([density_f_derivative(params, x, k) for x in np.asarray(grid, dtype=float)])


def tail_onset(params: StableParams, rel_tol: float = 0.05, x_max: float = 1e4, points: int = 41) -> float:
    """
    Smallest x* on a log grid in [1, x_max] such that x^{alpha+1} f(x) stays
    within rel_tol of A for every grid point x >= x*.

    Raises:
        WrongRegime: c_plus = 0, so A = 0 and the tail is not a power law
        NumericalError: no such point below x_max
    """
    if not params.has_positive_jumps:
        raise WrongRegime("x^{alpha+1} f(x) -> A needs c_plus > 0")
    grid = np.geomspace(1.0, x_max, points)
    ratios = np.array([x ** (params.alpha + 1.0) * density_f(params, x) for x in grid])
    inside = np.abs(ratios / params.tail_A - 1.0) <= rel_tol
    if not inside[-1]:
        raise NumericalError(f"tail not within {rel_tol:g} of A below x = {x_max:g}")
    outside = np.flatnonzero(~inside)
    onset = grid[0] if outside.size == 0 else grid[outside[-1] + 1]
    logger.debug("tail onset x* = %g (rel_tol=%g)", onset, rel_tol)
    return float(onset)
