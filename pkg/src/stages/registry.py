"""
Stage Registry Module
=====================

Registration and discovery of pipeline stages.

ADDING A STAGE:
---------------

1. Create a stage class extending BaseStage (see base.py)
2. Import it here and append it to STAGE_CLASSES
3. It is then ordered by step_order in the sequential workflow

The order of STAGE_CLASSES does NOT decide execution order; step_order does.
"""
import logging
from typing import Dict, List, Optional, Type

from .base import BaseStage
from .density import DensityStage
from .identities import IdentitiesStage
from .meander import MeanderStage
from .supremum import SupremumStage
from .verification import VerificationStage

logger = logging.getLogger(__name__)


# =============================================================================
# STAGE REGISTRATION
# =============================================================================

STAGE_CLASSES: List[Type[BaseStage]] = [
    DensityStage,       # Step 1: f on the grid, derivatives
    SupremumStage,      # Step 2: supremum simulation, m table
    MeanderStage,       # Step 3: meander simulation, p~ and p^up tables
    IdentitiesStage,    # Step 4: m from p~, passage table
    VerificationStage,  # Step 5: asymptotic laws
]


class StageRegistry:
    """
    Registry of pipeline stages, sorted by step_order.

    Usage:
        registry = StageRegistry()
        for stage in registry.get_stages():
            print(stage.stage_name)
    """

    def __init__(self, stage_classes: Optional[List[Type[BaseStage]]] = None):
        self._classes = stage_classes or STAGE_CLASSES
        self._stages: List[BaseStage] = []
        self._by_id: Dict[str, BaseStage] = {}
        self._initialize_stages()

    def _initialize_stages(self):
        for cls in self._classes:
            stage = cls()
            if stage.stage_id in self._by_id:
                raise ValueError(f"duplicate stage id '{stage.stage_id}'")
            self._stages.append(stage)
            self._by_id[stage.stage_id] = stage
        self._stages.sort(key=lambda s: s.step_order)

    # =========================================================================
    # GETTERS
    # =========================================================================

    def get_stages(self) -> List[BaseStage]:
        return self._stages

    def get_stage(self, stage_id: str) -> BaseStage:
        """
        Raises:
            KeyError: unknown stage id
        """
        if stage_id not in self._by_id:
            raise KeyError(f"Stage '{stage_id}' not found in registry")
        return self._by_id[stage_id]

    def get_stage_ids(self) -> List[str]:
        return [s.stage_id for s in self._stages]

    # =========================================================================
    # WORKFLOW HELPERS
    # =========================================================================

    def get_workflow_edges(self) -> List[tuple]:
        """(from_id, to_id) pairs of the sequential workflow."""
        return [
            (self._stages[i].stage_id, self._stages[i + 1].stage_id)
            for i in range(len(self._stages) - 1)
        ]

    def get_entry_point(self) -> str:
        return self._stages[0].stage_id if self._stages else ""

    def get_exit_point(self) -> str:
        return self._stages[-1].stage_id if self._stages else ""

    # =========================================================================
    # STATE HELPERS
    # =========================================================================

    def get_field_file_map(self) -> List[tuple]:
        """(field_name, filename) for every field written to disk."""
        return [
            (field_name, filename)
            for stage in self._stages
            for field_name, filename, _ in stage.output_fields
            if filename
        ]

    def describe_pipeline(self) -> str:
        lines = ["SUPREMA pipeline"]
        for i, stage in enumerate(self._stages):
            prefix = "└──" if i == len(self._stages) - 1 else "├──"
            lines.append(f"{prefix} [{stage.step_order}] {stage.stage_name}: {stage.description}")
        return "\n".join(lines)


# =============================================================================
# GLOBAL REGISTRY INSTANCE
# =============================================================================

registry = StageRegistry()


def get_stages() -> List[BaseStage]:
    return registry.get_stages()


def get_stage(stage_id: str) -> BaseStage:
    return registry.get_stage(stage_id)

