"""
Identities Stage
================

Evaluates the exact identities on the simulated tables:

- m from p~ by the Beta-kernel convolution, compared with the directly
  simulated m on [0.1, 10]
- first-passage density h_x(t) and survival P(tau_x > t) over the run's
  time grid, from the simulated m when present, otherwise from m built
  out of p~
"""
from typing import Any, Dict

from scipy.integrate import trapezoid

from ..identities.convolution import m_table_from_ptilde
from ..identities.density_fn import DensityFn
from ..identities.passage import passage_table
from ..stable.tables import scale_density
from .base import BaseStage
from .supremum import max_relative_deviation

COMPARISON_WINDOW = (0.1, 10.0)


class IdentitiesStage(BaseStage):
    """Convolution and passage identities."""

    stage_id = "identities"
    stage_name = "Identities"
    display_name = "Exact identities"
    step_order = 4
    description = "m from p~ by convolution, first-passage density and survival"

    output_fields = [
        ("m_from_ptilde", "m_from_ptilde.csv", "table"),
        ("passage", "passage_table.csv", "frame"),
    ]

    required_fields = ["config", "params", "grid"]

    def run(self, state: Dict[str, Any]) -> Dict[str, Any]:
        config, params, grid = state["config"], state["params"], state["grid"]
        ptilde_table = state.get("ptilde_table")
        m_table = state.get("m_table")
        if ptilde_table is None and m_table is None:
            return self.skip_execution(state, "neither p~ nor m is available")

        out = {}
        if ptilde_table is not None:
            ptilde = DensityFn.for_ptilde(ptilde_table, params)
            m_conv = m_table_from_ptilde(ptilde, params, grid)
            if m_table is not None:
                deviation = max_relative_deviation(m_conv, m_table, COMPARISON_WINDOW)
                self._notify_status(
                    f"m from p~ vs simulated m: max relative difference {deviation:.2%} on [0.1, 10]"
                )
                m_conv = m_conv.with_meta(max_relative_deviation=deviation)
            out["m_from_ptilde"] = m_conv

        source = m_table if m_table is not None else out["m_from_ptilde"]
        if config.horizon != 1.0:
            source = scale_density(source, 1.0 / config.horizon, params.eta)
        m = DensityFn.for_m(source, params)
        x = config.passage_x
        frame = passage_table(m, params, x, config.times())
        frame["tail"] = frame["t"] ** (params.rho + 1.0) * frame["density"]
        mass = float(trapezoid(frame["density"], frame["t"]))
        self._notify_status(f"passage x={x:g}: integral of h over the time grid {mass:.5f}")
        out["passage"] = frame
        return out
