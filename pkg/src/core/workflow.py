"""
Workflow Module
===============

LangGraph workflow of the verification pipeline, built from the stages in
the registry.

ARCHITECTURE:
-------------

    StageRegistry
         |
         +-- get_stages()         -> stages sorted by step_order
         +-- get_workflow_edges() -> sequential edges
                |
                v
    StateGraph(PipelineState)
         |
         +-- add_node(id, stage)
         +-- add_edge(a, b)
         +-- compile()
                |
                v
    Compiled app
         |
         +-- invoke(state)


PARALLEL LAYOUT:
----------------

            ┌─────────┐
            │ Density │
            └────┬────┘
                 │
         ┌───────┴───────┐
         │               │
    ┌────▼─────┐   ┌─────▼───┐
    │ Supremum │   │ Meander │  ← Parallel
    └────┬─────┘   └─────┬───┘
         │               │
         └───────┬───────┘
                 │
          ┌──────▼─────┐
          │ Identities │
          └──────┬─────┘
                 │
         ┌───────▼──────┐
         │ Verification │
         └──────────────┘

Supremum and meander draw from disjoint random substreams of the same
seed, so the parallel and sequential layouts give identical results.
"""
import logging
from typing import Optional

from langgraph.graph import END, StateGraph

from ..stages import StageRegistry, registry as default_registry
from .state import PipelineState, create_initial_state

logger = logging.getLogger(__name__)


def create_workflow(stage_registry: Optional[StageRegistry] = None) -> StateGraph:
    """
    Sequential workflow: every stage after the previous one, by step_order.

    Raises:
        ValueError: no stage registered
    """
    stage_registry = stage_registry or default_registry
    stages = stage_registry.get_stages()
    if not stages:
        raise ValueError("No stage registered")

    workflow = StateGraph(PipelineState)
    for stage in stages:
        workflow.add_node(stage.stage_id, stage)

    workflow.set_entry_point(stage_registry.get_entry_point())
    for from_id, to_id in stage_registry.get_workflow_edges():
        workflow.add_edge(from_id, to_id)
    workflow.add_edge(stage_registry.get_exit_point(), END)
    return workflow


def create_parallel_workflow(stage_registry: Optional[StageRegistry] = None) -> StateGraph:
    """
    Workflow with the two simulations as parallel branches.

        Phase 1: density
        Phase 2: supremum + meander (parallel)
        Phase 3: identities (waits for both)
        Phase 4: verification
    """
    stage_registry = stage_registry or default_registry
    workflow = StateGraph(PipelineState)
    for stage in stage_registry.get_stages():
        workflow.add_node(stage.stage_id, stage)

    workflow.set_entry_point("density")

    # Fan-out
    workflow.add_edge("density", "supremum")
    workflow.add_edge("density", "meander")

    # Fan-in: identities runs once both branches are done
    workflow.add_edge(["supremum", "meander"], "identities")

    workflow.add_edge("identities", "verification")
    workflow.add_edge("verification", END)
    return workflow


def run_pipeline(config, parallel: bool = True) -> PipelineState:
    """
    Run the full pipeline for one RunConfig and return the final state.

    Raises:
        ParameterError, ConfigError: invalid configuration
        SupremaError: a stage failed numerically
    """
    params = config.params()
    state = create_initial_state(config, params, config.grid())
    workflow = create_parallel_workflow() if parallel else create_workflow()
    app = workflow.compile()
    logger.info("running %s pipeline", "parallel" if parallel else "sequential")
    return app.invoke(state)


def describe_workflow(stage_registry: Optional[StageRegistry] = None) -> str:
    stage_registry = stage_registry or default_registry
    lines = [f"Entry point: {stage_registry.get_entry_point()}", "Edges:"]
    lines += [f"  {a} -> {b}" for a, b in stage_registry.get_workflow_edges()]
    lines.append(f"  {stage_registry.get_exit_point()} -> END")
    return "\n".join(lines)
