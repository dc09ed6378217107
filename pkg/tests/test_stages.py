import math

import numpy as np
import pytest

from src.asymptotics import SKIPPED, PASS
from src.core.state import create_initial_state, merge_list, merge_str, merge_value
from src.core.workflow import create_parallel_workflow, create_workflow, describe_workflow, run_pipeline
from src.stages import (
    BaseStage,
    DensityStage,
    IdentitiesStage,
    MeanderStage,
    StageRegistry,
    SupremumStage,
    VerificationStage,
    registry,
)
from src.utils.runconfig import RunConfig


def _config(**overrides) -> RunConfig:
    values = dict(
        alpha=1.5, c_plus=1.0, c_minus=1.0, seed=11,
        n_paths=2000, meander_paths=200, n_steps=32, levels=(8, 16, 32),
        grid_min=0.05, grid_max=20.0, grid_points=12,
        t_min=0.1, t_max=10.0, t_points=5, passage_x=1.0, workers=1,
    )
    values.update(overrides)
    return RunConfig(**values)


def _state(config: RunConfig) -> dict:
    return create_initial_state(config, config.params(), config.grid())


# =============================================================================
# REGISTRY
# =============================================================================

def test_stages_are_ordered_by_step():
    assert registry.get_stage_ids() == ["density", "supremum", "meander", "identities", "verification"]
    assert registry.get_entry_point() == "density"
    assert registry.get_exit_point() == "verification"
    assert registry.get_workflow_edges()[0] == ("density", "supremum")
    assert ("m_table", "m_table.csv") in registry.get_field_file_map()


def test_unknown_and_duplicate_stages():
    with pytest.raises(KeyError):
        registry.get_stage("bridge")
    with pytest.raises(ValueError):
        StageRegistry([DensityStage, DensityStage])


def test_stage_metadata_is_checked():
    class Nameless(BaseStage):
        step_order = 1

        def run(self, state):
            return {}

    with pytest.raises(ValueError):
        Nameless()


def test_describe_workflow():
    tree = registry.describe_pipeline().splitlines()
    assert tree[1].startswith("├── [1] Density")
    assert tree[-1].startswith("└── [5] Verification")
    text = describe_workflow()
    assert "Entry point: density" in text
    assert "identities -> verification" in text
    assert "verification -> END" in text


def test_workflows_compile():
    assert create_workflow().compile() is not None
    assert create_parallel_workflow().compile() is not None


# =============================================================================
# REDUCERS
# =============================================================================

def test_reducers():
    array = np.arange(3.0)
    assert merge_value(array, None) is array
    assert merge_value(None, array) is array
    assert merge_list(["density"], ["supremum", "density"]) == ["density", "supremum"]
    assert merge_str("started", "") == "started"
    assert merge_str("started", "density_done") == "density_done"


# =============================================================================
# STAGES
# =============================================================================

def test_required_fields_are_checked():
    with pytest.raises(ValueError, match="required field 'config'"):
        SupremumStage()({})


def test_density_stage_writes_only_its_fields():
    config = _config(alpha=1.0, c_plus=1.0 / math.pi, c_minus=1.0 / math.pi,
                     grid_min=0.5, grid_max=2.0, grid_points=3, derivatives=1)
    out = DensityStage()(_state(config))
    assert set(out) == {"f_table", "f_derivatives", "status", "completed"}
    assert out["status"] == "density_done" and out["completed"] == ["density"]
    np.testing.assert_allclose(out["f_table"].values, 1.0 / (math.pi * (1.0 + config.grid() ** 2)), atol=1e-6)
    # f'(1) = -1 / (2 pi)
    assert out["f_derivatives"][1][1] == pytest.approx(-1.0 / (2.0 * math.pi), abs=1e-6)


def test_density_stage_rescales_the_horizon():
    config = _config(grid_min=0.5, grid_max=2.0, grid_points=3, horizon=8.0)
    out = DensityStage()(_state(config))
    unit = DensityStage()(_state(_config(grid_min=0.125, grid_max=0.5, grid_points=3)))
    # f_8(x) = f(x / 4) / 4
    np.testing.assert_allclose(out["f_table"].values, unit["f_table"].values / 4.0, rtol=1e-9)


@pytest.mark.parametrize("p_up", [False, True])
def test_meander_stage_weights_p_up_only_on_request(monkeypatch, p_up):
    calls = []

    def fake_p_up(params, ptilde):
        calls.append(ptilde)
        return ptilde

    monkeypatch.setattr("src.stages.meander.estimate_p_up", fake_p_up)
    out = MeanderStage()(_state(_config(p_up=p_up)))
    assert len(calls) == int(p_up)
    assert ("p_up_table" in out) == p_up
    assert out["ptilde_table"] is not None


def test_identities_stage_skips_without_tables():
    out = IdentitiesStage()(_state(_config()))
    assert out == {"status": "identities_done", "completed": ["identities"]}


def test_verification_without_simulations_skips_their_laws():
    out = VerificationStage()(_state(_config()))
    report = out["report"]
    assert report.entry("m_tail").verdict == SKIPPED
    assert report.entry("ptilde_zero").reason == "missing artifact ptilde_table"
    assert report.entry("f_tail").verdict == PASS
    assert "A" not in out["constants"]


# =============================================================================
# PIPELINE
# =============================================================================

def test_parallel_and_sequential_pipelines_agree():
    config = _config()
    parallel = run_pipeline(config, parallel=True)
    sequential = run_pipeline(config, parallel=False)

    assert set(parallel["completed"]) == set(registry.get_stage_ids())
    np.testing.assert_array_equal(parallel["m_table"].values, sequential["m_table"].values)
    np.testing.assert_array_equal(parallel["ptilde_table"].values, sequential["ptilde_table"].values)
    assert [e.verdict for e in parallel["report"].entries] == [e.verdict for e in sequential["report"].entries]
    assert list(parallel["passage"].columns)[:3] == ["t", "density", "survival"]
