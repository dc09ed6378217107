"""State definition for the verification pipeline."""
from typing import Any, List, TypedDict

# Use typing_extensions for better compatibility with LangGraph's type processing
try:
    from typing import Annotated
except ImportError:
    from typing_extensions import Annotated


def merge_str(left: Any, right: Any) -> str:
    """Reducer for string fields: a non-empty right value wins."""
    if right:
        return right
    return left if left else ""


def merge_value(left: Any, right: Any) -> Any:
    """Reducer for artifact fields: the last non-None write wins.

    Never evaluates truthiness, so numpy arrays and tables are safe.
    """
    return left if right is None else right


def merge_list(left: Any, right: Any) -> List[Any]:
    """Reducer for list fields: concatenate, dropping repeats, order kept."""
    merged = list(left or [])
    for item in right or []:
        if item not in merged:
            merged.append(item)
    return merged


class PipelineState(TypedDict, total=False):
    """State carried through the verification workflow.

    Every field has a reducer so that the parallel supremum and meander
    branches can write back in the same superstep. Each stage writes only
    its own artifact fields.
    """
    # Inputs
    config: Annotated[Any, merge_value]          # RunConfig
    params: Annotated[Any, merge_value]          # StableParams
    grid: Annotated[Any, merge_value]            # np.ndarray

    # density stage
    f_table: Annotated[Any, merge_value]         # DensityTable
    f_derivatives: Annotated[Any, merge_value]   # {k: np.ndarray}

    # supremum stage
    sup_runs: Annotated[Any, merge_value]        # {level: MCRun}
    m_table: Annotated[Any, merge_value]         # DensityTable
    m_oracle: Annotated[Any, merge_value]        # DensityTable, c_plus = 0 only

    # meander stage
    meander_runs: Annotated[Any, merge_value]    # {level: MCRun}
    ptilde_table: Annotated[Any, merge_value]    # DensityTable
    p_up_table: Annotated[Any, merge_value]      # DensityTable

    # identities stage
    m_from_ptilde: Annotated[Any, merge_value]   # DensityTable
    passage: Annotated[Any, merge_value]         # pd.DataFrame

    # verification stage
    report: Annotated[Any, merge_value]          # AsymptoticReport
    constants: Annotated[Any, merge_value]       # {name: ConstantEstimate}

    # Status tracking
    status: Annotated[str, merge_str]
    completed: Annotated[List[str], merge_list]


def create_initial_state(config, params, grid) -> PipelineState:
    """Create the initial state of a run."""
    return {
        "config": config,
        "params": params,
        "grid": grid,
        "status": "started",
        "completed": [],
    }
