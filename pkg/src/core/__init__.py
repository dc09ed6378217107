from .errors import SupremaError
from .state import PipelineState, create_initial_state

__all__ = ["SupremaError", "PipelineState", "create_initial_state"]
