"""
Verification report and measured constants.

An AsymptoticReport holds one LawEntry per law id: what was predicted,
what was fitted, the tolerance applied and the verdict. Failures are
verdicts here, never exceptions.
"""
import logging
import math
from dataclasses import dataclass, field, fields
from typing import Dict, List, Optional, Sequence

import pandas as pd

from ..core.errors import MissingLaw
from ..stable.params import StableParams
from .fitting import TailFit

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

# Normal quantile for 95% confidence intervals
Z95 = 1.96


@dataclass(frozen=True)
class Tolerances:
    """
    Verdict rule: |measured - predicted| <= tol + stderr_multiplier * stderr.

    Exponents compare absolutely, constants relatively. Each law picks one
    exponent and one constant tolerance by field name.
    """

    exponent: float = 0.15
    constant: float = 0.20
    meander_constant: float = 0.25
    stderr_multiplier: float = 2.0
    tight_exponent: float = 0.10
    tight_constant: float = 0.10
    pup_exponent: float = 0.20

    @classmethod
    def zero(cls) -> "Tolerances":
        """Every tolerance 0: no measured law can pass."""
        return cls(**{f.name: 0.0 for f in fields(cls)})


@dataclass(frozen=True)
class LawEntry:
    """
    One row of the report.

    Attributes:
        law_id: stable identifier, e.g. "m_tail"
        description: the law in words
        predicted_exponent: exponent the law predicts, None for ratio checks
        predicted_constant: constant the law predicts when it is known
        fit: the TailFit behind the verdict
        verdict: PASS, FAIL or SKIPPED
        reason: why a law was skipped or failed
        exponent_tol / constant_tol: tolerances applied
        measured / measured_stderr: the compared quantity of a ratio check
        window_shift: exponent change when the fit window moves by a factor 2
    """

    law_id: str
    description: str
    predicted_exponent: Optional[float]
    predicted_constant: Optional[float]
    fit: Optional[TailFit]
    verdict: str
    reason: str = ""
    exponent_tol: float = 0.0
    constant_tol: float = 0.0
    measured: Optional[float] = None
    measured_stderr: Optional[float] = None
    window_shift: Optional[float] = None

    @property
    def verdict_label(self) -> str:
        return f"{self.verdict}({self.reason})" if self.verdict == SKIPPED else self.verdict

    def as_row(self) -> dict:
        row = {
            "law_id": self.law_id,
            "predicted_exponent": self.predicted_exponent,
            "fitted_exponent": None,
            "stderr_exponent": None,
            "predicted_constant": self.predicted_constant,
            "fitted_constant": self.measured,
            "stderr_constant": self.measured_stderr,
            "x_lo": None,
            "x_hi": None,
            "window_shift": self.window_shift,
            "exponent_tol": self.exponent_tol,
            "constant_tol": self.constant_tol,
            "verdict": self.verdict_label,
            "reason": self.reason,
        }
        if self.fit is not None:
            row.update(
                fitted_exponent=self.fit.exponent,
                stderr_exponent=self.fit.stderr_exponent,
                fitted_constant=self.fit.constant,
                stderr_constant=self.fit.stderr_constant,
                x_lo=self.fit.window[0],
                x_hi=self.fit.window[1],
            )
        return row


@dataclass
class AsymptoticReport:
    """Ledger of every law for one parameter set."""

    params: StableParams
    entries: List[LawEntry] = field(default_factory=list)
    tolerances: Tolerances = field(default_factory=Tolerances)

    def add(self, entry: LawEntry) -> None:
        if any(e.law_id == entry.law_id for e in self.entries):
            raise ValueError(f"law {entry.law_id} already reported")
        self.entries.append(entry)

    def entry(self, law_id: str) -> LawEntry:
        for e in self.entries:
            if e.law_id == law_id:
                return e
        raise KeyError(f"Law '{law_id}' not in report")

    @property
    def failed(self) -> List[LawEntry]:
        return [e for e in self.entries if e.verdict == FAIL]

    @property
    def passed(self) -> bool:
        """True when no law failed; skips are allowed."""
        return not self.failed

    def counts(self) -> Dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for e in self.entries:
            out[e.verdict] += 1
        return out

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([e.as_row() for e in self.entries])


# =============================================================================
# CONSTANTS
# =============================================================================

@dataclass(frozen=True)
class ConstantEstimate:
    """A measured constant with a 95% confidence interval."""

    name: str
    value: float
    stderr: float
    law_id: str
    structural: Optional[float] = None

    @property
    def ci(self):
        return (self.value - Z95 * self.stderr, self.value + Z95 * self.stderr)

    @property
    def relative_to_structural(self) -> Optional[float]:
        if self.structural is None or self.structural == 0.0:
            return None
        return self.value / self.structural - 1.0


# name -> (law id, what the fitted constant is)
CONSTANT_SOURCES = {
    "A": "m_tail",
    "B": "m_zero",
    "B_cdf": "sup_cdf_zero",
    "C": "ptilde_zero",
    "D": "f_zero",
}


def estimate_constants(report: AsymptoticReport, names: Sequence[str] = ("A", "B", "B_cdf", "C", "D")) -> Dict[str, ConstantEstimate]:
    """
    Point estimates and confidence intervals of A, B, C and D.

    B_cdf is B measured through the distribution function (fitted constant
    times alpha rho); it should agree with B within the combined intervals.

    Raises:
        MissingLaw: a requested constant's law was skipped or failed
    """
    out: Dict[str, ConstantEstimate] = {}
    for name in names:
        if name not in CONSTANT_SOURCES:
            raise KeyError(f"unknown constant {name!r}")
        law_id = CONSTANT_SOURCES[name]
        try:
            entry = report.entry(law_id)
        except KeyError:
            raise MissingLaw(f"constant {name}: law {law_id} not in report") from None
        if entry.verdict != PASS or entry.fit is None:
            raise MissingLaw(f"constant {name}: law {law_id} is {entry.verdict_label}")

        value, stderr = entry.fit.constant, entry.fit.stderr_constant
        if name == "B_cdf":
            scale = report.params.alpha_rho
            value, stderr = value * scale, stderr * scale
        structural = report.params.tail_A if name == "A" else None
        out[name] = ConstantEstimate(name, value, stderr, law_id, structural)
        logger.info("%s = %.6g +- %.3g (%s)", name, value, stderr, law_id)
    return out


def constants_agree(first: ConstantEstimate, second: ConstantEstimate, multiplier: float = Z95) -> bool:
    """True when two estimates differ by less than their combined interval."""
    combined = math.hypot(first.stderr, second.stderr)
    return abs(first.value - second.value) <= multiplier * combined
