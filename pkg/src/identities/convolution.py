"""
Supremum density from the meander density.

Two quadratures of the same identity:

    m(x) = (sin(rho pi) / pi) int_0^1 s^{-eta} p~(x s^{-eta}) s^{rho-1} (1-s)^{-rho} ds

    m(x) = (alpha x^{alpha rho - 1} sin(rho pi) / pi)
               int_x^inf p~(y) (y^alpha - x^alpha)^{-rho} dy

The first runs on Gauss–Jacobi panels whose breakpoints are the images
s = (x / y_i)^alpha of the table grid. The second substitutes
u = y^alpha - x^alpha, which turns the singularity at y = x into the
algebraic weight u^{-rho}.
"""
import logging
import math

import numpy as np
from scipy import integrate

from config.settings import SETTINGS

from ..core.errors import QuadratureFailure
from ..stable.params import StableParams
from ..stable.tables import DensityTable
from .density_fn import DensityFn
from .quadrature import jacobi_panel_integral

logger = logging.getLogger(__name__)

REL_TOL = 1e-8


def _check(value: float, abserr: float, what: str, x: float) -> float:
    if abserr > REL_TOL * abs(value) and abserr > 1e-300:
        raise QuadratureFailure(
            f"{what} at x={x:g}: error estimate {abserr:.3g} vs value {value:.6g}"
        )
    return value


def m_from_ptilde_beta(ptilde: DensityFn, params: StableParams, x: float) -> float:
    """
    m(x) by Gauss–Jacobi panels in s.

    Raises:
        QuadratureFailure: estimated relative error above 1e-8
    """
    if not x > 0.0:
        raise ValueError(f"x must be > 0, got {x!r}")
    rho, eta, alpha = params.rho, params.eta, params.alpha

    # Beyond the grid p~ is c y^right, so s^{-eta} p~(x s^{-eta}) is c' s^q near 0;
    # the weight s^{rho-1+q} absorbs it exactly.
    right = ptilde.right_exponent
    q = 0.0 if right is None else -eta * (1.0 + right)
    if not rho - 1.0 + q > -1.0:
        q = 0.0

    def smooth(s):
        y = x * s ** (-eta)
        return s ** (-eta - q) * ptilde(y)

    grid = ptilde.grid
    breakpoints = (x / grid[grid > x]) ** alpha
    value, abserr = jacobi_panel_integral(smooth, breakpoints, a=-rho, b=rho - 1.0 + q, rtol=1e-11)
    factor = math.sin(rho * math.pi) / math.pi
    return _check(factor * value, factor * abserr, "Jacobi convolution", x)


def m_from_ptilde_z(ptilde: DensityFn, params: StableParams, x: float) -> float:
    """
    m(x) by adaptive quadrature in u = y^alpha - x^alpha.

    Raises:
        QuadratureFailure: estimated relative error above 1e-8
    """
    if not x > 0.0:
        raise ValueError(f"x must be > 0, got {x!r}")
    rho, eta, alpha = params.rho, params.eta, params.alpha
    xa = x ** alpha

    def jacobian(u):
        return eta * (u + xa) ** (eta - 1.0)

    def with_weight(u):
        return ptilde((u + xa) ** eta) * jacobian(u)

    def full(u):
        return with_weight(u) * u ** (-rho)

    grid = ptilde.grid
    cuts = grid[grid > x] ** alpha - xa
    first = cuts[0] if cuts.size else xa
    last = cuts[-1] if cuts.size else first
    opts = dict(epsabs=0.0, epsrel=1e-11)

    # [0, first]: algebraic weight u^{-rho}
    value, abserr = integrate.quad(with_weight, 0.0, first, weight="alg", wvar=(-rho, 0.0), limit=200, **opts)[:2]
    # [first, last]: kinks at the grid images
    if last > first:
        inner = cuts[1:-1]
        mid, mid_err = integrate.quad(
            full, first, last, points=inner if inner.size else None,
            limit=max(200, 4 * inner.size + 50), **opts,
        )[:2]
        value += mid
        abserr += mid_err
    # [last, inf): power-law extension
    tail, tail_err = integrate.quad(full, last, np.inf, limit=200, epsabs=0.0, epsrel=1e-10)[:2]
    value += tail
    abserr += tail_err

    factor = alpha * x ** (alpha * rho - 1.0) * math.sin(rho * math.pi) / math.pi
    return _check(factor * value, factor * abserr, "u-substituted convolution", x)


METHODS = {
    "beta": m_from_ptilde_beta,
    "z": m_from_ptilde_z,
}


def m_table_from_ptilde(ptilde: DensityFn, params: StableParams, grid, method: str = "beta") -> DensityTable:
    """Tabulate m from a meander density on a grid."""
    evaluate = METHODS[method]
    grid = np.asarray(grid, dtype=float)
    values = np.array([evaluate(ptilde, params, x) for x in grid])
    values = np.maximum(values, 0.0)

    errbars = None
    if ptilde.table.errbars is not None:
        # First-order propagation: the identity is linear in p~
        upper = DensityFn(
            DensityTable(ptilde.grid, ptilde.table.values + ptilde.table.errbars,
                         meta=ptilde.table.meta, normalized=False),
            ptilde.left_exponent, ptilde.right_exponent,
        )
        errbars = np.abs(np.array([evaluate(upper, params, x) for x in grid]) - values)

    meta = dict(ptilde.table.meta)
    meta.pop("level_bias", None)
    meta.update(quantity="m", source="meander-convolution", method=method, **ptilde.flags)
    logger.info("m from p~ (%s) on %d points", method, grid.size)
    return DensityTable(grid, values, errbars, meta, normalized=False)
