"""
Panelized Gauss–Jacobi quadrature on [0, 1].

Computes

    int_0^1 s^b (1 - s)^a F(s) ds,      a, b > -1

where F is smooth inside each panel between known breakpoints. The panel
touching 0 carries the weight s^b in its Gauss–Jacobi nodes, the panel
touching 1 carries (1 - s)^a; interior panels are plain Gauss–Legendre
with the weight folded into the integrand. Each panel is checked by
comparing n and 2n nodes and bisected until the two agree.
"""
import logging
from functools import lru_cache
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy.special import roots_jacobi

from config.settings import SETTINGS

logger = logging.getLogger(__name__)

MAX_DEPTH = 40


@lru_cache(maxsize=256)
def gauss_jacobi(n: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for (1 - t)^a (1 + t)^b on [-1, 1]."""
    nodes, weights = roots_jacobi(n, a, b)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _panel_rule(func: Callable, lo: float, hi: float, a: float, b: float, n: int) -> float:
    a_here = a if hi == 1.0 else 0.0
    b_here = b if lo == 0.0 else 0.0
    t, w = gauss_jacobi(n, a_here, b_here)
    half = 0.5 * (hi - lo)
    s = lo + half * (1.0 + t)
    values = np.asarray(func(s), dtype=float)
    if lo > 0.0 and b != 0.0:
        values = values * s ** b
    if hi < 1.0 and a != 0.0:
        values = values * (1.0 - s) ** a
    return float(half ** (a_here + b_here + 1.0) * np.dot(w, values))


def jacobi_panel_integral(
    func: Callable,
    breakpoints: Sequence[float],
    a: float,
    b: float,
    nodes: int = None,
    rtol: float = 1e-10,
    atol: float = 0.0,
) -> Tuple[float, float]:
    """
    int_0^1 s^b (1 - s)^a func(s) ds with func vectorized over s.

    Returns:
        (value, abserr) where abserr sums the per-panel |I_2n - I_n|
    """
    if not (a > -1.0 and b > -1.0):
        raise ValueError(f"Jacobi exponents must exceed -1, got a={a}, b={b}")
    n = nodes or SETTINGS.JACOBI_NODES
    edges = [0.0] + sorted(p for p in breakpoints if 0.0 < p < 1.0) + [1.0]
    edges = [e for i, e in enumerate(edges) if i == 0 or e > edges[i - 1]]

    total, error = 0.0, 0.0
    stack: List[Tuple[float, float, int]] = [(lo, hi, 0) for lo, hi in zip(edges[:-1], edges[1:])]
    while stack:
        lo, hi, depth = stack.pop()
        coarse = _panel_rule(func, lo, hi, a, b, n)
        fine = _panel_rule(func, lo, hi, a, b, 2 * n)
        err = abs(fine - coarse)
        if err <= max(rtol * abs(fine), atol) or depth >= MAX_DEPTH:
            if depth >= MAX_DEPTH and err > max(rtol * abs(fine), atol):
                logger.debug("panel [%g, %g] hit max depth with error %.3g", lo, hi, err)
            total += fine
            error += err
            continue
        mid = 0.5 * (lo + hi)
        stack.append((lo, mid, depth + 1))
        stack.append((mid, hi, depth + 1))
    return total, error
