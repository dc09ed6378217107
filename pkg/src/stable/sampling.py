"""Exact stable variates by the Chambers–Mallows–Stuck method."""
import math

import numpy as np

from .params import StableParams


def stable_variates(params: StableParams, size, rng: np.random.Generator) -> np.ndarray:
    """
    Draw i.i.d. copies of X_1.

    For alpha != 1, with V uniform on (-pi/2, pi/2) and W standard exponential,

        X = S sin(alpha (V + B)) / cos(V)^{1/alpha}
              * (cos(V - alpha (V + B)) / W)^{(1 - alpha)/alpha}

    where B = atan(zeta) / alpha and S = (1 + zeta^2)^{1/(2 alpha)}, scaled by
    gamma^{1/alpha}. For the symmetric alpha = 1 case X = gamma tan(V).
    """
    v = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size=size)

    if params.alpha == 1.0:
        return params.gamma * np.tan(v)

    w = rng.standard_exponential(size=size)
    alpha = params.alpha
    b = math.atan(params.zeta) / alpha
    s = (1.0 + params.zeta * params.zeta) ** (0.5 / alpha)
    shifted = alpha * (v + b)
    x = (
        s * np.sin(shifted) / np.cos(v) ** (1.0 / alpha)
        * (np.cos(v - shifted) / w) ** ((1.0 - alpha) / alpha)
    )
    return params.gamma ** params.eta * x


def sample_X1(params: StableParams, stream: np.random.Generator) -> float:
    """One exact draw of X_1 from a caller-owned stream."""
    return float(stable_variates(params, None, stream))
