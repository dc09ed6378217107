"""
Asymptotic Laws
===============

The table of laws checked by verify_all. Each law names the artifact it
reads, the side it lives on, the exponent it predicts and, when known, the
constant.

    law id               quantity                            exponent        constant
    -------------------  ----------------------------------  --------------  -------------------
    sup_tail             P(S_1 > x), Hill on samples         -alpha          A / alpha
    sup_cdf_zero         P(S_1 <= x)                         alpha rho       (B / alpha rho)
    m_tail               m(x)                                -(alpha+1)      A
    m_zero               m(x)                                alpha rho - 1   (B)
    ptilde_zero          p~(x)                               alpha rho       (C)
    ptilde_tail          p~(x)                               -(alpha+1)      A / rho
    f_zero               f(x)                                0               (D)
    h_large_t            h_x(t), t -> inf                    -(rho+1)        eta B x^{alpha rho}
    h_small_t            h_x(t), t -> 0                      0               A eta / x^alpha
    pup_zero             p^up(x)                             alpha
    pup_tail             p^up(x)                             -(alpha rho+1)
    f_tail               f(x)                                -(alpha+1)      A
    f_derivative_k1      f'(x)                               -(alpha+2)      -(alpha+1) A
    f_derivative_k2      f''(x)                              -(alpha+3)      (alpha+1)(alpha+2) A
    m_ptilde_tail_ratio  const(ptilde_tail) / const(m_tail)  -               1 / rho

Constants in parentheses are measured, not predicted. Laws that need
positive jumps are skipped when c_plus = 0.
Each law names the Tolerances fields it is judged with; see Law.tolerances.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Optional

import numpy as np

from ..core.errors import NumericalError, SupremaError
from ..fluctuation.config import MCRun
from ..identities.density_fn import DensityFn
from ..stable.density import tail_onset
from ..stable.params import StableParams
from ..stable.tables import DensityTable
from .fitting import INFINITY, ZERO, TailFit, auto_window, fit_power_law, window_shift
from .report import FAIL, PASS, SKIPPED, AsymptoticReport, LawEntry, Tolerances

logger = logging.getLogger(__name__)

EVALUATOR_POINTS = 13
# x^{alpha+1} f(x) within this of A where the far window may start
FAR_ONSET_TOL = 0.02
NO_POSITIVE_JUMPS = "no positive jumps"


@dataclass
class VerificationArtifacts:
    """
    Everything verify_all reads, all produced under one StableParams.

    Attributes:
        f: x -> f(x)
        f_derivative: (x, k) -> f^(k)(x)
        m_table: supremum density
        ptilde_table: meander density
        p_up_table: conditioned-to-stay-positive density
        h: (x, t) -> h_x(t)
        sup_run: raw supremum samples for the Hill check
        passage_x: level x of the passage-time laws
    """

    f: Optional[Callable[[float], float]] = None
    f_derivative: Optional[Callable[[float, int], float]] = None
    m_table: Optional[DensityTable] = None
    ptilde_table: Optional[DensityTable] = None
    p_up_table: Optional[DensityTable] = None
    h: Optional[Callable[[float, float], float]] = None
    sup_run: Optional[MCRun] = None
    passage_x: float = 2.0


class MissingArtifact(Exception):
    """Internal: the law's input was not supplied."""


def _need(value, name: str):
    if value is None:
        raise MissingArtifact(name)
    return value


def _evaluator_table(func: Callable[[float], float], lo: float, hi: float, quantity: str) -> DensityTable:
    grid = np.geomspace(lo, hi, EVALUATOR_POINTS)
    values = np.array([func(x) for x in grid])
    return DensityTable(grid, values, meta={"quantity": quantity}, normalized=False)


@lru_cache(maxsize=32)
def _far_window(params: StableParams):
    """
    Decade for the tails of f and its derivatives.

    Starts at 10^{2/min(alpha, 1)}; for alpha < 1 it moves in to the tail
    onset when that comes first, never below 100.
    """
    lo = 10.0 ** (2.0 / min(params.alpha, 1.0))
    if params.alpha < 1.0 and params.has_positive_jumps:
        try:
            lo = min(lo, max(100.0, tail_onset(params, FAR_ONSET_TOL, x_max=lo, points=21)))
        except NumericalError:
            logger.debug("no tail onset below %g, far window stays there", lo)
    return lo, 10.0 * lo


@dataclass
class Law:
    """One asymptotic law: what to measure and what to expect."""

    law_id: str
    description: str
    exponent: Callable[[StableParams], Optional[float]]
    constant: Callable[[StableParams, Dict[str, TailFit], float], Optional[float]]
    measure: Callable[[StableParams, VerificationArtifacts, Dict[str, TailFit]], TailFit]
    needs_positive_jumps: bool = False
    constant_tol: str = "constant"
    exponent_tol: str = "exponent"

    def tolerances(self, params: StableParams, tol: Tolerances):
        """(exponent, constant) tolerance for this law under params."""
        exponent = getattr(tol, self.exponent_tol)
        if self.law_id == "m_zero" and math.isclose(params.alpha_rho, 1.0):
            # alpha rho = 1: m is flat at zero, a pure slope check
            exponent = tol.tight_exponent
        return exponent, getattr(tol, self.constant_tol)


# =============================================================================
# MEASUREMENTS
# =============================================================================

def _sup_tail(params, art, fits):
    return fit_power_law(_need(art.sup_run, "sup_run"), INFINITY)


def _sup_cdf(params, art, fits):
    table = _need(art.m_table, "m_table")
    m = DensityFn.for_m(table, params)
    cdf = DensityTable(table.grid, m.cdf(table.grid), meta=table.meta, normalized=False)
    return fit_power_law(cdf, ZERO)


def _table_fit(attr: str, side: str):
    def measure(params, art, fits):
        return fit_power_law(_need(getattr(art, attr), attr), side)
    return measure


def _f_zero(params, art, fits):
    table = _evaluator_table(_need(art.f, "f"), 1e-4, 1e-2, "f")
    return fit_power_law(table, ZERO, (1e-4, 1e-2))


def _f_tail(params, art, fits):
    lo, hi = _far_window(params)
    table = _evaluator_table(_need(art.f, "f"), lo, hi, "f")
    return fit_power_law(table, INFINITY, (lo, hi))


def _f_derivative(k: int):
    def measure(params, art, fits):
        derivative = _need(art.f_derivative, "f_derivative")
        lo, hi = _far_window(params)
        sign = -1.0 if k % 2 else 1.0
        table = _evaluator_table(lambda x: sign * derivative(x, k), lo, hi, f"f{k}")
        fit = fit_power_law(table, INFINITY, (lo, hi))
        return TailFit(
            fit.exponent, sign * fit.constant, fit.window,
            fit.stderr_exponent, fit.stderr_constant, fit.method, fit.n_points,
        )
    return measure


def _h_window(params: StableParams, y_lo: float, y_hi: float, x: float, from_top: bool):
    """t-window whose images x t^{-eta} cover [y_lo, y_hi], widened to a decade in t."""
    span = max(1.0, params.eta)
    if from_top:
        y_lo = y_hi / 10.0 ** span
    else:
        y_hi = y_lo * 10.0 ** span
    return (x / y_hi) ** params.alpha, (x / y_lo) ** params.alpha


def _h_large_t(params, art, fits):
    h = _need(art.h, "h")
    table = _need(art.m_table, "m_table")
    y_lo, y_hi = fits["m_zero"].window if "m_zero" in fits else auto_window(table, ZERO)
    x = art.passage_x
    t_lo, t_hi = _h_window(params, y_lo, y_hi, x, from_top=False)
    ht = _evaluator_table(lambda t: h(x, t), t_lo, t_hi, "h")
    return fit_power_law(ht, INFINITY, (t_lo, t_hi))


def _h_small_t(params, art, fits):
    h = _need(art.h, "h")
    table = _need(art.m_table, "m_table")
    y_lo, y_hi = fits["m_tail"].window if "m_tail" in fits else auto_window(table, INFINITY)
    x = art.passage_x
    t_lo, t_hi = _h_window(params, y_lo, y_hi, x, from_top=True)
    ht = _evaluator_table(lambda t: h(x, t), t_lo, t_hi, "h")
    return fit_power_law(ht, ZERO, (t_lo, t_hi))


# =============================================================================
# LAW TABLE
# =============================================================================

def _derivative_constant(k: int):
    def constant(p, fits, x):
        return (-1.0) ** k * math.gamma(p.alpha + 1.0 + k) / math.gamma(p.alpha + 1.0) * p.tail_A
    return constant


def _h_large_constant(p, fits, x):
    if "m_zero" not in fits:
        return None
    return p.eta * fits["m_zero"].constant * x ** p.alpha_rho


def _none(p, fits, x):
    return None


LAWS = [
    Law("sup_tail", "P(S_1 > x) ~ P(X_1 > x) ~ (A/alpha) x^-alpha",
        lambda p: -p.alpha, lambda p, f, x: p.tail_A / p.alpha, _sup_tail, True),
    Law("sup_cdf_zero", "P(S_1 <= x) ~ (B/alpha rho) x^(alpha rho)",
        lambda p: p.alpha_rho, _none, _sup_cdf),
    Law("m_tail", "m(x) ~ A x^-(alpha+1)",
        lambda p: -(p.alpha + 1.0), lambda p, f, x: p.tail_A, _table_fit("m_table", INFINITY), True),
    Law("m_zero", "m(x) ~ B x^(alpha rho - 1)",
        lambda p: p.alpha_rho - 1.0, _none, _table_fit("m_table", ZERO)),
    Law("ptilde_zero", "p~(x) ~ C x^(alpha rho)",
        lambda p: p.alpha_rho, _none, _table_fit("ptilde_table", ZERO)),
    Law("ptilde_tail", "p~(x) ~ (A/rho) x^-(alpha+1)",
        lambda p: -(p.alpha + 1.0), lambda p, f, x: p.tail_A / p.rho,
        _table_fit("ptilde_table", INFINITY), True, "meander_constant"),
    Law("f_zero", "f(0+) = D in (0, inf)",
        lambda p: 0.0, _none, _f_zero),
    Law("h_large_t", "h_x(t) ~ eta B x^(alpha rho) t^-(rho+1)",
        lambda p: -(p.rho + 1.0), _h_large_constant, _h_large_t, exponent_tol="tight_exponent"),
    Law("h_small_t", "h_x(t) -> A eta / x^alpha as t -> 0",
        lambda p: 0.0, lambda p, f, x: p.tail_A * p.eta / x ** p.alpha, _h_small_t, True,
        constant_tol="tight_constant"),
    Law("pup_zero", "p^up(x) ~ c x^alpha",
        lambda p: p.alpha, _none, _table_fit("p_up_table", ZERO), exponent_tol="pup_exponent"),
    Law("pup_tail", "p^up(x) ~ c x^-(alpha rho + 1)",
        lambda p: -(p.alpha_rho + 1.0), _none, _table_fit("p_up_table", INFINITY), True,
        exponent_tol="pup_exponent"),
    Law("f_tail", "x^(alpha+1) f(x) -> A",
        lambda p: -(p.alpha + 1.0), lambda p, f, x: p.tail_A, _f_tail, True),
    Law("f_derivative_k1", "f'(x) ~ -(alpha+1) A x^-(alpha+2)",
        lambda p: -(p.alpha + 2.0), _derivative_constant(1), _f_derivative(1), True,
        constant_tol="tight_constant", exponent_tol="tight_exponent"),
    Law("f_derivative_k2", "f''(x) ~ (alpha+1)(alpha+2) A x^-(alpha+3)",
        lambda p: -(p.alpha + 3.0), _derivative_constant(2), _f_derivative(2), True),
]

TABLE_ATTRS = {
    "m_tail": "m_table",
    "m_zero": "m_table",
    "ptilde_zero": "ptilde_table",
    "ptilde_tail": "ptilde_table",
    "pup_zero": "p_up_table",
    "pup_tail": "p_up_table",
}

RATIO_LAW = "m_ptilde_tail_ratio"
LAW_IDS = [law.law_id for law in LAWS] + [RATIO_LAW]

# Laws skipped exactly when c_plus = 0
POSITIVE_JUMP_LAWS = frozenset([law.law_id for law in LAWS if law.needs_positive_jumps] + [RATIO_LAW])


# =============================================================================
# VERDICTS
# =============================================================================

def _judge(law: Law, params: StableParams, fit: TailFit, predicted_constant, tol: Tolerances):
    exp_tol, const_tol = law.tolerances(params, tol)
    mult = tol.stderr_multiplier
    predicted_exponent = law.exponent(params)

    problems = []
    deviation = abs(fit.exponent - predicted_exponent)
    if deviation > exp_tol + mult * fit.stderr_exponent:
        problems.append(f"exponent off by {deviation:.3g}")
    if predicted_constant is not None:
        relative = abs(fit.constant / predicted_constant - 1.0)
        allowed = const_tol + mult * fit.stderr_constant / abs(predicted_constant)
        if relative > allowed:
            problems.append(f"constant off by {relative:.1%}")
    elif law.law_id == "f_zero":
        if not (math.isfinite(fit.constant) and fit.constant > 0.0):
            problems.append("f(0+) is not finite and positive")
    return (FAIL, "; ".join(problems)) if problems else (PASS, "")


def _ratio_entry(params: StableParams, fits: Dict[str, TailFit], tol: Tolerances) -> LawEntry:
    predicted = 1.0 / params.rho
    base = dict(
        law_id=RATIO_LAW,
        description="m(x) ~ rho p~(x): const(ptilde_tail) / const(m_tail) = 1/rho",
        predicted_exponent=None,
        predicted_constant=predicted,
        fit=None,
        constant_tol=tol.meander_constant,
    )
    if "m_tail" not in fits or "ptilde_tail" not in fits:
        return LawEntry(verdict=FAIL, reason="needs the m and p~ tail fits", **base)
    m_fit, p_fit = fits["m_tail"], fits["ptilde_tail"]
    ratio = p_fit.constant / m_fit.constant
    stderr = abs(ratio) * math.hypot(
        p_fit.stderr_constant / p_fit.constant, m_fit.stderr_constant / m_fit.constant
    )
    relative = abs(ratio / predicted - 1.0)
    allowed = tol.meander_constant + tol.stderr_multiplier * stderr / predicted
    verdict = PASS if relative <= allowed else FAIL
    reason = "" if verdict == PASS else f"ratio off by {relative:.1%}"
    return LawEntry(verdict=verdict, reason=reason, measured=ratio, measured_stderr=stderr, **base)


def verify_all(
    params: StableParams,
    artifacts: VerificationArtifacts,
    tolerances: Optional[Tolerances] = None,
) -> AsymptoticReport:
    """
    Check every law and return the report.

    Never raises for a failed or unmeasurable law: the failure is the
    verdict, with the reason attached.
    """
    tol = tolerances or Tolerances()
    report = AsymptoticReport(params=params, tolerances=tol)
    fits: Dict[str, TailFit] = {}
    x = artifacts.passage_x

    for law in LAWS:
        exp_tol, const_tol = law.tolerances(params, tol)
        common = dict(
            law_id=law.law_id,
            description=law.description,
            predicted_exponent=law.exponent(params),
            exponent_tol=exp_tol,
            constant_tol=const_tol,
        )
        if law.needs_positive_jumps and not params.has_positive_jumps:
            report.add(LawEntry(predicted_constant=None, fit=None, verdict=SKIPPED, reason=NO_POSITIVE_JUMPS, **common))
            continue
        try:
            fit = law.measure(params, artifacts, fits)
        except MissingArtifact as exc:
            report.add(LawEntry(predicted_constant=None, fit=None, verdict=SKIPPED,
                                reason=f"missing artifact {exc}", **common))
            continue
        except (SupremaError, ValueError) as exc:
            logger.warning("%s: %s", law.law_id, exc)
            report.add(LawEntry(predicted_constant=None, fit=None, verdict=FAIL,
                                reason=f"{type(exc).__name__}: {exc}", **common))
            continue

        fits[law.law_id] = fit
        predicted_constant = law.constant(params, fits, x)
        verdict, reason = _judge(law, params, fit, predicted_constant, tol)

        shift = None
        if law.law_id in TABLE_ATTRS:
            shift = window_shift(getattr(artifacts, TABLE_ATTRS[law.law_id]), fit)
            if shift is not None and abs(shift) > 2.0 * fit.stderr_exponent:
                logger.info("%s: moving the window by 2x shifts the exponent by %.3g", law.law_id, shift)

        report.add(LawEntry(predicted_constant=predicted_constant, fit=fit, verdict=verdict,
                            reason=reason, window_shift=shift, **common))

    if params.has_positive_jumps:
        report.add(_ratio_entry(params, fits, tol))
    else:
        report.add(LawEntry(law_id=RATIO_LAW, description="m(x) ~ rho p~(x)", predicted_exponent=None,
                            predicted_constant=None, fit=None, verdict=SKIPPED, reason=NO_POSITIVE_JUMPS))

    counts = report.counts()
    logger.info("verification: %d pass, %d fail, %d skipped", counts[PASS], counts[FAIL], counts[SKIPPED])
    return report
