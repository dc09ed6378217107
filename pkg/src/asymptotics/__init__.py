"""
Asymptotics Package
===================

Power-law fits and the verdict ledger for every asymptotic law at zero and
infinity.
"""
from .fitting import HILL, INFINITY, OLS, ZERO, TailFit, auto_window, fit_power_law, hill_fit
from .report import (
    FAIL,
    PASS,
    SKIPPED,
    AsymptoticReport,
    ConstantEstimate,
    LawEntry,
    Tolerances,
    constants_agree,
    estimate_constants,
)
from .laws import LAW_IDS, LAWS, POSITIVE_JUMP_LAWS, VerificationArtifacts, verify_all

__all__ = [
    "TailFit",
    "fit_power_law",
    "hill_fit",
    "auto_window",
    "ZERO",
    "INFINITY",
    "OLS",
    "HILL",
    "AsymptoticReport",
    "LawEntry",
    "ConstantEstimate",
    "Tolerances",
    "estimate_constants",
    "constants_agree",
    "PASS",
    "FAIL",
    "SKIPPED",
    "LAWS",
    "LAW_IDS",
    "POSITIVE_JUMP_LAWS",
    "VerificationArtifacts",
    "verify_all",
]
