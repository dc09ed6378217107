"""
Base Stage Module
=================

Base class for every stage of the verification pipeline.

CREATING A STAGE:
-----------------

1. Create a module in src/stages/ (e.g. my_stage.py)

2. Extend BaseStage:

   from .base import BaseStage

   class MyStage(BaseStage):
       stage_id = "my_stage"           # Node name in the workflow
       stage_name = "My Stage"         # Name in logs
       step_order = 6                  # Execution order (1-based)
       description = "What it computes"

       # Fields this stage writes: (state_key, csv file or "", kind)
       output_fields = [
           ("my_table", "my_table.csv", "table"),
       ]

       # Fields that must be present before the stage runs
       required_fields = ["params", "grid"]

       def run(self, state):
           return {"my_table": ...}

3. Register it in src/stages/registry.py (STAGE_CLASSES)

4. Add its output fields to PipelineState in src/core/state.py


LIFECYCLE:
----------

1. Stages are instantiated when the registry loads
2. The workflow calls the stage with the current state
3. execute() checks required_fields, logs, calls run(), and returns only
   the keys run() produced plus status bookkeeping

"""
import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Tuple

logger = logging.getLogger(__name__)


class BaseStage(ABC):
    """
    Base class for pipeline stages.

    Attributes:
        stage_id (str): unique id, used as the workflow node name
        stage_name (str): name for logging
        display_name (str): longer name for reports
        step_order (int): position in the sequential pipeline (1-based)
        description (str): one-line summary
        output_fields (List[Tuple]): (state_key, filename, kind)
        required_fields (List[str]): state keys needed before running
    """

    # =========================================================================
    # METADATA - Override in subclasses
    # =========================================================================

    stage_id: str = ""
    stage_name: str = ""
    display_name: str = ""
    step_order: int = 0
    description: str = ""

    output_fields: List[Tuple[str, str, str]] = []
    required_fields: List[str] = []

    def __init__(self):
        self._validate_metadata()

    def _validate_metadata(self):
        if not self.stage_id:
            raise ValueError(f"{self.__class__.__name__}: stage_id must be set")
        if not self.stage_name:
            raise ValueError(f"{self.__class__.__name__}: stage_name must be set")
        if self.step_order <= 0:
            raise ValueError(f"{self.__class__.__name__}: step_order must be > 0")

    # =========================================================================
    # ABSTRACT METHODS
    # =========================================================================

    @abstractmethod
    def run(self, state: Dict[str, Any]) -> Dict[str, Any]:
        """
        Compute this stage's artifacts.

        Args:
            state: the pipeline state

        Returns:
            Dictionary with ONLY the keys this stage produces
        """

    # =========================================================================
    # MAIN EXECUTION
    # =========================================================================

    def execute(self, state: Dict[str, Any]) -> Dict[str, Any]:
        """
        Entry point called by the workflow.

        Returns only the modified keys, so that parallel branches merging
        into the same superstep never write the same artifact field.
        """
        self._check_required_fields(state)
        self._notify_status(">>> Starting")

        modified = dict(self.run(state))

        modified["status"] = f"{self.stage_id}_done"
        modified["completed"] = [self.stage_id]
        self._notify_status(f">>> {self.stage_name} completed")
        return modified

    def _check_required_fields(self, state: Dict[str, Any]):
        """
        Raises:
            ValueError: a required field is missing from the state
        """
        for name in self.required_fields:
            if state.get(name) is None:
                raise ValueError(
                    f"{self.stage_name}: required field '{name}' is missing from the state. "
                    f"Run the stage that produces it first."
                )

    # =========================================================================
    # HELPER METHODS
    # =========================================================================

    def _notify_status(self, message: str):
        logger.info("[%s] %s", self.display_name or self.stage_name, message)

    def skip_execution(self, state: Dict[str, Any], reason: str = "") -> Dict[str, Any]:
        """
        Skip the stage: no artifact fields are written.

        Call this from run() when the stage does not apply.
        """
        if reason:
            self._notify_status(f">>> Skipped: {reason}")
        return {}

    def __call__(self, state: Dict[str, Any]) -> Dict[str, Any]:
        """Make the stage usable directly as a LangGraph node."""
        return self.execute(state)

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__}(id={self.stage_id}, step={self.step_order})>"
