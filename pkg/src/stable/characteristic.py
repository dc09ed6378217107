"""
Characteristic exponent of a strictly stable process.

psi(theta) is defined by E[exp(i theta X_1)] = exp(psi(theta)). Two routes
are provided:

- char_exponent: the closed form
      psi(theta) = -gamma |theta|^alpha (1 - i zeta sgn(theta))
- levy_khintchine_exponent: direct quadrature of the Lévy density with
  strict-stability centering (no compensator for alpha < 1, full
  compensator for alpha > 1, symmetric for alpha = 1)

The closed form is what the inversion code uses; the quadrature is the
reference it is checked against.
"""
import math

import numpy as np
from scipy import integrate

from .params import StableParams


def char_exponent(params: StableParams, theta: float) -> complex:
    """psi(theta) from the closed form; psi(0) = 0 and psi(-theta) = conj psi(theta)."""
    theta = float(theta)
    if theta == 0.0:
        return 0j
    scale = params.gamma * abs(theta) ** params.alpha
    return complex(-scale, scale * params.zeta * math.copysign(1.0, theta))


# =============================================================================
# LÉVY–KHINTCHINE QUADRATURE
# =============================================================================

def _cos_kernel(x: float) -> float:
    # (cos x - 1) / x^2, written without cancellation
    if x == 0.0:
        return -0.5
    s = math.sin(0.5 * x)
    return -2.0 * s * s / (x * x)


def _sinc(x: float) -> float:
    if x == 0.0:
        return 1.0
    return math.sin(x) / x


def _sin_minus_identity_kernel(x: float) -> float:
    # (sin x - x) / x^3
    if abs(x) < 1e-2:
        x2 = x * x
        return -1.0 / 6.0 + x2 / 120.0 - x2 * x2 / 5040.0
    return (math.sin(x) - x) / (x * x * x)


def _unit_integrals(alpha: float) -> tuple:
    """
    Return (R, J) with

        R = int_0^inf (cos x - 1) x^{-1-alpha} dx
        J = int_0^inf (sin x - x 1{alpha > 1}) x^{-1-alpha} dx

    J is 0 for alpha = 1, where only the symmetric case is admissible.
    """
    opts = dict(epsabs=1e-14, epsrel=1e-12, limit=200)

    def power(x):
        return x ** (-1.0 - alpha)

    near, _ = integrate.quad(_cos_kernel, 0.0, 1.0, weight="alg", wvar=(1.0 - alpha, 0.0), **opts)
    far, _ = integrate.quad(power, 1.0, np.inf, weight="cos", wvar=1.0, epsabs=1e-14, limlst=100)
    real = near + far - 1.0 / alpha

    if alpha == 1.0:
        return real, 0.0

    if alpha < 1.0:
        near, _ = integrate.quad(_sinc, 0.0, 1.0, weight="alg", wvar=(-alpha, 0.0), **opts)
        far, _ = integrate.quad(power, 1.0, np.inf, weight="sin", wvar=1.0, epsabs=1e-14, limlst=100)
        imag = near + far
    else:
        near, _ = integrate.quad(
            _sin_minus_identity_kernel, 0.0, 1.0, weight="alg", wvar=(2.0 - alpha, 0.0), **opts
        )
        far, _ = integrate.quad(power, 1.0, np.inf, weight="sin", wvar=1.0, epsabs=1e-14, limlst=100)
        imag = near + far - 1.0 / (alpha - 1.0)
    return real, imag


def levy_khintchine_exponent(params: StableParams, theta: float) -> complex:
    """
    psi(theta) by numerical integration of the Lévy density.

    The unit integrals are computed at theta = 1 and carried to other theta
    by exact alpha-homogeneity of the Lévy measure.
    """
    theta = float(theta)
    if theta == 0.0:
        return 0j
    real, imag = _unit_integrals(params.alpha)
    psi_one = complex(
        (params.c_plus + params.c_minus) * real,
        (params.c_plus - params.c_minus) * imag,
    )
    value = abs(theta) ** params.alpha * psi_one
    return value if theta > 0 else value.conjugate()
