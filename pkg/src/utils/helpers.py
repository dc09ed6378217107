"""Helper utility functions: logging setup, hashing and CSV output."""
import hashlib
import locale
import logging
import sys
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from config.settings import SETTINGS

logger = logging.getLogger(__name__)

PREFERRED_ENCODING = locale.getpreferredencoding(False) or "utf-8"

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"
LOG_DATE_FORMAT = "%H:%M:%S"

# Significant digits in CSV output; fixed so that re-runs compare byte for byte
FLOAT_FORMAT = "%.12g"

CSV_HEADER_PREFIX = "#"


def setup_logging(level: Optional[Union[str, int]] = None) -> None:
    """
    Configure the root logger once for the CLI.

    Args:
        level: log level name or number; SETTINGS.LOG_LEVEL when omitted
    """
    level = level if level is not None else SETTINGS.LOG_LEVEL
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO
    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        datefmt=LOG_DATE_FORMAT,
        stream=sys.stderr,
        force=True,
    )


def sanitize_for_output(text: str) -> str:
    """Sanitize text for safe output encoding."""
    try:
        text.encode(PREFERRED_ENCODING)
        return text
    except UnicodeEncodeError:
        return text.encode(PREFERRED_ENCODING, "replace").decode(PREFERRED_ENCODING)


def format_exception(exc: Exception) -> str:
    """Format exception message safely, prefixed with its class name."""
    return sanitize_for_output(f"{type(exc).__name__}: {exc}")


def config_hash(text: str) -> str:
    """Full sha256 hex digest of a configuration text."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def provenance_header(digest: str, seed: int) -> str:
    return f"{CSV_HEADER_PREFIX} config_hash={digest} seed={seed}"


def write_csv(frame: pd.DataFrame, path: Path, digest: str, seed: int) -> Path:
    """
    Write a frame as CSV under a provenance comment line.

    The first line is `# config_hash=<sha256> seed=<seed>`, then the header
    row, then the data with '.' as decimal separator and LF line endings.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(provenance_header(digest, seed) + "\n")
        frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info("wrote %s (%d rows)", path, len(frame))
    return path


def read_csv(path: Path) -> pd.DataFrame:
    """Read a CSV written by write_csv, skipping the provenance line."""
    return pd.read_csv(path, skiprows=1)


def read_provenance(path: Path) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.readline().rstrip("\n")


def write_text(text: str, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    return path
