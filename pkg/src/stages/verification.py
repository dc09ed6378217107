"""
Verification Stage
==================

Checks every asymptotic law against the pipeline artifacts and estimates
the constants A, B, C and D. Law failures are verdicts in the report; the
stage itself only fails on missing inputs.
"""
import logging
from typing import Any, Dict

from ..asymptotics.laws import VerificationArtifacts, verify_all
from ..asymptotics.report import CONSTANT_SOURCES, estimate_constants
from ..core.errors import MissingLaw
from ..identities.density_fn import DensityFn
from ..identities.passage import passage_density
from ..stable.density import density_f, density_f_derivative
from ..stable.tables import scale_density
from .base import BaseStage

logger = logging.getLogger(__name__)


def build_artifacts(state: Dict[str, Any]) -> VerificationArtifacts:
    """Collect what verify_all reads, carried to horizon 1."""
    config, params = state["config"], state["params"]
    t = config.horizon

    def at_unit_time(table):
        if table is None or t == 1.0:
            return table
        return scale_density(table, 1.0 / t, params.eta)

    m_table = at_unit_time(state.get("m_table"))
    h = None
    if m_table is not None:
        m = DensityFn.for_m(m_table, params)

        def h(x, time):
            return passage_density(m, params, x, time)

    sup_runs = state.get("sup_runs") or {}
    sup_run = sup_runs[max(sup_runs)] if sup_runs and t == 1.0 else None

    return VerificationArtifacts(
        f=lambda x: density_f(params, x),
        f_derivative=lambda x, k: density_f_derivative(params, x, k),
        m_table=m_table,
        ptilde_table=at_unit_time(state.get("ptilde_table")),
        p_up_table=at_unit_time(state.get("p_up_table")),
        h=h,
        sup_run=sup_run,
        passage_x=config.passage_x,
    )


class VerificationStage(BaseStage):
    """Asymptotic law ledger."""

    stage_id = "verification"
    stage_name = "Verification"
    display_name = "Asymptotic verification"
    step_order = 5
    description = "power-law fits against every asymptotic law, constants A-D"

    output_fields = [
        ("report", "report.csv", "report"),
        ("constants", "constants.csv", "constants"),
    ]

    required_fields = ["config", "params"]

    def run(self, state: Dict[str, Any]) -> Dict[str, Any]:
        config, params = state["config"], state["params"]
        artifacts = build_artifacts(state)
        report = verify_all(params, artifacts, config.tolerances())

        constants = {}
        for name in CONSTANT_SOURCES:
            try:
                constants.update(estimate_constants(report, [name]))
            except MissingLaw as exc:
                logger.info("constant %s not estimated: %s", name, exc)

        counts = report.counts()
        self._notify_status(
            f"{counts['pass']} pass, {counts['fail']} fail, {counts['skipped']} skipped"
        )
        return {"report": report, "constants": constants}
