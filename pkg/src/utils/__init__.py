"""Utility functions."""
from .helpers import config_hash, format_exception, sanitize_for_output, setup_logging, write_csv
from .runconfig import RunConfig, parse_config_text

__all__ = [
    "config_hash",
    "format_exception",
    "sanitize_for_output",
    "setup_logging",
    "write_csv",
    "RunConfig",
    "parse_config_text",
]
