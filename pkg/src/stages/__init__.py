"""
SUPREMA Stage Module
====================

Pipeline stages and their registry.

QUICK START:
------------

    from src.stages import registry

    for stage in registry.get_stages():
        print(f"{stage.step_order}. {stage.stage_name}")


ARCHITECTURE:
-------------

    BaseStage (base.py)
        │
        ├── DensityStage
        ├── SupremumStage
        ├── MeanderStage
        ├── IdentitiesStage
        └── VerificationStage
              │
              └── StageRegistry (registry.py)
                      │
                      ├── Workflow (core/workflow.py)
                      └── CLI (cli.py)

"""
from .base import BaseStage
from .density import DensityStage
from .supremum import SupremumStage
from .meander import MeanderStage
from .identities import IdentitiesStage
from .verification import VerificationStage, build_artifacts
from .registry import STAGE_CLASSES, StageRegistry, get_stage, get_stages, registry

__all__ = [
    "BaseStage",
    "DensityStage",
    "SupremumStage",
    "MeanderStage",
    "IdentitiesStage",
    "VerificationStage",
    "build_artifacts",
    "STAGE_CLASSES",
    "StageRegistry",
    "registry",
    "get_stage",
    "get_stages",
]
