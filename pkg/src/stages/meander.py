"""
Meander Stage
=============

Simulates skeleton paths conditioned to stay positive by rejection,
extrapolates the level densities of the endpoint to the meander density
p~, and, when the run asks for it, weights it into the density of the
process conditioned to stay positive (p^up).
"""
from typing import Any, Dict

from ..core.errors import NonNormalizable
from ..fluctuation.conditioned import estimate_p_up
from ..fluctuation.config import MEANDER
from ..fluctuation.extrapolate import extrapolate_levels
from ..fluctuation.simulate import acceptance_decay, simulate_meander_levels
from .base import BaseStage


class MeanderStage(BaseStage):
    """Monte Carlo meander density and its p^up weighting."""

    stage_id = "meander"
    stage_name = "Meander"
    display_name = "Meander density"
    step_order = 3
    description = "rejection-sampled meander endpoints, p~ and p^up tables"

    output_fields = [
        ("meander_runs", "meander_samples_level{level}.csv", "runs"),
        ("ptilde_table", "ptilde_table.csv", "table"),
        ("p_up_table", "p_up_table.csv", "table"),
    ]

    required_fields = ["config", "params", "grid"]

    def run(self, state: Dict[str, Any]) -> Dict[str, Any]:
        config, params, grid = state["config"], state["params"], state["grid"]

        runs = simulate_meander_levels(params, config.mc_config(MEANDER))
        finest = runs[max(runs)]
        self._notify_status(
            f"acceptance rate {finest.acceptance_rate:.4g} at level {finest.level} "
            f"({len(finest)} of {finest.n_attempted} paths)"
        )
        if len(runs) > 1:
            self._notify_status(f"acceptance decay exponent {acceptance_decay(runs):.3f} (expected {params.rho - 1.0:.3f})")

        ptilde = extrapolate_levels(runs, grid)
        out = {"meander_runs": runs, "ptilde_table": ptilde}

        if not config.p_up:
            return out
        try:
            out["p_up_table"] = estimate_p_up(params, ptilde)
        except NonNormalizable as exc:
            self._notify_status(f">>> p^up not computed: {exc}")
        return out
