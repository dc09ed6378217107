"""
SUPREMA command line.

COMMANDS:
---------

    density   f_t table (x, f, abs_err [, f1, f2])
    sup       supremum simulation: extrapolated m table and raw samples
    meander   meander simulation: p~ table, m from p~, optional p^up table
    passage   first-passage density and survival over a time grid
    verify    full pipeline and the asymptotic report

Every command writes CSV files with a `# config_hash=... seed=...` first
line and echoes the effective configuration to effective_config.txt in the
output directory.

EXIT CODES:
-----------

    0  success
    1  numerical failure, or a verification report with a failed law
    2  usage or configuration error
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence

import pandas as pd

from .core.errors import ConfigError, NonNormalizable, ParameterError, SupremaError
from .core.state import create_initial_state
from .core.workflow import run_pipeline
from .stable.tables import DensityTable
from .stages import DensityStage, IdentitiesStage, MeanderStage, SupremumStage
from .utils.formatters import constants_frame, format_report
from .utils.helpers import format_exception, setup_logging, write_csv, write_text
from .utils.runconfig import RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

EFFECTIVE_CONFIG = "effective_config.txt"


# =============================================================================
# PARSER
# =============================================================================

def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    add = common.add_argument
    add("--config", type=Path, help="key = value config file")
    add("--alpha", type=float)
    add("--c-plus", dest="c_plus", type=float)
    add("--c-minus", dest="c_minus", type=float)
    add("--seed", type=int)
    add("--paths", dest="n_paths", type=int, help="supremum paths")
    add("--meander-paths", dest="meander_paths", type=int, help="accepted meander paths")
    add("--steps", dest="n_steps", type=int, help="finest skeleton resolution")
    add("--levels", type=str, help="comma-separated skeleton levels, e.g. 128,256,512")
    add("--grid-min", dest="grid_min", type=float)
    add("--grid-max", dest="grid_max", type=float)
    add("--grid-points", dest="grid_points", type=int)
    add("--grid-log", dest="grid_spacing", action="store_const", const="log")
    add("--grid-linear", dest="grid_spacing", action="store_const", const="linear")
    add("--out", type=str, help="output directory")
    add("--t", dest="horizon", type=float, help="time horizon")
    add("--x", dest="passage_x", type=float, help="passage level")
    add("--t-min", dest="t_min", type=float)
    add("--t-max", dest="t_max", type=float)
    add("--t-points", dest="t_points", type=int)
    add("--derivatives", type=int, choices=(0, 1, 2), help="also tabulate f' (1) and f'' (2)")
    add("--p-up", dest="p_up", action="store_const", const=True, help="emit the p^up table")
    add("--workers", type=int, help="Monte Carlo threads (results do not depend on it)")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true")
    verbosity.add_argument("--quiet", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="suprema",
        description="Densities of the supremum of stable Levy processes.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_options()
    for name, summary in (
        ("density", "tabulate the marginal density f_t"),
        ("sup", "simulate the supremum and tabulate m"),
        ("meander", "simulate the meander and tabulate p~ (and p^up)"),
        ("passage", "first-passage density and survival"),
        ("verify", "full pipeline and asymptotic report"),
    ):
        commands.add_parser(name, parents=[common], help=summary, description=summary)
    return parser


CONFIG_OPTIONS = (
    "alpha", "c_plus", "c_minus", "seed", "n_paths", "meander_paths", "n_steps", "levels",
    "grid_min", "grid_max", "grid_points", "grid_spacing", "out", "horizon", "passage_x",
    "t_min", "t_max", "t_points", "derivatives", "p_up", "workers",
)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {key: getattr(args, key, None) for key in CONFIG_OPTIONS}
    return RunConfig.from_sources(args.config, overrides)


# =============================================================================
# OUTPUT
# =============================================================================

class Outputs:
    """Writes CSV files for one run under its provenance header."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.directory = config.output_dir
        self.digest = config.digest()
        self.directory.mkdir(parents=True, exist_ok=True)
        write_text(config.to_text(), self.directory / EFFECTIVE_CONFIG)

    def csv(self, frame: pd.DataFrame, name: str) -> Path:
        return write_csv(frame, self.directory / name, self.digest, self.config.seed)

    def table(
        self,
        table: DensityTable,
        name: str,
        value_column: str,
        err_column: str = "stderr",
        level_bias: bool = False,
    ) -> Path:
        """Write x, value, error [, level_bias]; the bias is 0 when no extrapolation ran."""
        frame = table.to_frame(value_column, err_column)
        if level_bias:
            frame["level_bias"] = table.meta.get("level_bias", 0.0)
        return self.csv(frame, name)

    def runs(self, runs, prefix: str) -> None:
        for level in sorted(runs):
            self.csv(runs[level].to_frame(), f"{prefix}_samples_level{level}.csv")


def _stage_state(config: RunConfig) -> dict:
    return create_initial_state(config, config.params(), config.grid())


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_density(config: RunConfig) -> int:
    state = _stage_state(config)
    state.update(DensityStage()(state))
    out = Outputs(config)

    f_table = state["f_table"]
    frame = f_table.to_frame("f", "abs_err")
    for k, values in sorted(state["f_derivatives"].items()):
        frame[f"f{k}"] = values
    out.csv(frame, "f_table.csv")
    return EXIT_OK


def cmd_sup(config: RunConfig) -> int:
    state = _stage_state(config)
    state.update(SupremumStage()(state))
    out = Outputs(config)

    out.table(state["m_table"], "m_table.csv", "m", level_bias=True)
    out.runs(state["sup_runs"], "sup")
    if state.get("m_oracle") is not None:
        out.table(state["m_oracle"], "m_oracle.csv", "m_exact", "abs_err")
    return EXIT_OK


def cmd_meander(config: RunConfig) -> int:
    state = _stage_state(config)
    state.update(MeanderStage()(state))
    state.update(IdentitiesStage()(state))
    out = Outputs(config)

    out.table(state["ptilde_table"], "ptilde_table.csv", "ptilde", level_bias=True)
    out.runs(state["meander_runs"], "meander")
    out.table(state["m_from_ptilde"], "m_from_ptilde.csv", "m")
    if config.p_up:
        if state.get("p_up_table") is None:
            raise NonNormalizable("p^up table could not be normalized")
        out.table(state["p_up_table"], "p_up_table.csv", "p_up")
    return EXIT_OK


def cmd_passage(config: RunConfig) -> int:
    state = _stage_state(config)
    state.update(SupremumStage()(state))
    state.update(IdentitiesStage()(state))
    out = Outputs(config)

    out.table(state["m_table"], "m_table.csv", "m", level_bias=True)
    out.csv(state["passage"], "passage_table.csv")
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    state = run_pipeline(config)
    out = Outputs(config)

    out.table(state["f_table"], "f_table.csv", "f", "abs_err")
    out.table(state["m_table"], "m_table.csv", "m", level_bias=True)
    out.runs(state["sup_runs"], "sup")
    if state.get("m_oracle") is not None:
        out.table(state["m_oracle"], "m_oracle.csv", "m_exact", "abs_err")
    out.table(state["ptilde_table"], "ptilde_table.csv", "ptilde", level_bias=True)
    out.runs(state["meander_runs"], "meander")
    if state.get("p_up_table") is not None:
        out.table(state["p_up_table"], "p_up_table.csv", "p_up")
    out.table(state["m_from_ptilde"], "m_from_ptilde.csv", "m")
    out.csv(state["passage"], "passage_table.csv")

    report, constants = state["report"], state.get("constants") or {}
    out.csv(report.to_frame(), "report.csv")
    out.csv(constants_frame(constants), "constants.csv")
    text = format_report(report, constants)
    write_text(text, out.directory / "report.txt")
    print(text, end="")
    return EXIT_OK if report.passed else EXIT_FAILURE


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "density": cmd_density,
    "sup": cmd_sup,
    "meander": cmd_meander,
    "passage": cmd_passage,
    "verify": cmd_verify,
}


# =============================================================================
# ENTRY POINT
# =============================================================================

def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    if args.verbose:
        setup_logging(logging.DEBUG)
    elif args.quiet:
        setup_logging(logging.WARNING)
    else:
        setup_logging()

    try:
        config = config_from_args(args)
        config.params()
        logger.info(">>> Starting %s (config %s)", args.command, config.digest()[:12])
        logger.info("output directory %s, %d worker thread(s)", config.out, config.workers)
        code = COMMANDS[args.command](config)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {format_exception(exc)}", file=sys.stderr)
        return EXIT_USAGE
    except SupremaError as exc:
        print(f"error: {format_exception(exc)}", file=sys.stderr)
        return EXIT_FAILURE
    logger.info(">>> %s completed with exit code %d", args.command, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
