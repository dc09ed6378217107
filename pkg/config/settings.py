"""
Settings Module
===============

SUPREMA settings. Everything here can be customised through environment
variables (or a `.env` file next to run.py) or edited directly in code.

CUSTOMIZATION:
--------------

1. Output:
   - SUPREMA_OUTPUT_DIR picks the default directory for CSV output
   - The CLI flag --out always wins

2. Monte Carlo:
   - SUPREMA_WORKERS sets the thread count for simulation blocks;
     results are identical for any value
   - SUPREMA_BLOCK_PATHS is part of the reproducibility key: changing it
     changes the random substreams and therefore the samples

3. Numerics:
   - SUPREMA_QUAD_TOL / SUPREMA_TRUNCATION_TOL control the inversion
     quadrature of the marginal density

4. Defaults:
   - RUN_DEFAULTS holds the desk-scale defaults for every run-config key
     that has one; alpha, c_plus, c_minus and seed have none


ENVIRONMENT VARIABLES:
----------------------

  SUPREMA_OUTPUT_DIR      - Output directory (default: ./runs)
  SUPREMA_LOG_LEVEL       - DEBUG, INFO, WARNING, ... (default: INFO)
  SUPREMA_WORKERS         - Threads for Monte Carlo blocks (default: 1)
  SUPREMA_BLOCK_PATHS     - Paths per simulation block (default: 4096)
  SUPREMA_QUAD_TOL        - Per-point inversion error target (default: 1e-8)
  SUPREMA_TRUNCATION_TOL  - Inversion truncation error target (default: 1e-10)

"""

import os
from pathlib import Path

from dotenv import load_dotenv

# =============================================================================
# LOAD ENVIRONMENT
# =============================================================================

load_dotenv()

# =============================================================================
# PATH CONFIGURATION
# =============================================================================

# Root directory (the repository)
BASE_DIR = Path(__file__).resolve().parent.parent

# Default output directory for run artifacts
OUTPUT_DIR = Path(os.getenv("SUPREMA_OUTPUT_DIR", str(BASE_DIR / "runs")))

# =============================================================================
# LOGGING
# =============================================================================

LOG_LEVEL = os.getenv("SUPREMA_LOG_LEVEL", "INFO").upper()

# =============================================================================
# MONTE CARLO EXECUTION
# =============================================================================
# Workers only change wall-clock time. Block size changes the substream
# layout, so it is echoed into every output header.

WORKERS = int(os.getenv("SUPREMA_WORKERS", "1"))
BLOCK_PATHS = int(os.getenv("SUPREMA_BLOCK_PATHS", "4096"))

# Rejection sampling gives up below this acceptance rate
MIN_ACCEPTANCE_RATE = 1e-4

# =============================================================================
# NUMERICS
# =============================================================================

QUAD_TOL = float(os.getenv("SUPREMA_QUAD_TOL", "1e-8"))
TRUNCATION_TOL = float(os.getenv("SUPREMA_TRUNCATION_TOL", "1e-10"))

# Gauss nodes per panel for the Jacobi-weighted convolution rule
JACOBI_NODES = 24

# =============================================================================
# RUN DEFAULTS
# =============================================================================
# Desk-scale defaults for the run configuration (see src/utils/runconfig.py).
#
# FORMAT:
# - key: run-config key (same spelling as in the config file)
# - value: default, already typed
#
# ADDING A KEY:
# 1. Add the key here
# 2. Add its parser to RUN_KEYS in src/utils/runconfig.py
# 3. Read it from RunConfig where it is needed

RUN_DEFAULTS = {
    "n_paths": 1_000_000,
    "meander_paths": 100_000,
    "n_steps": 512,
    "levels": (128, 256, 512),
    "grid_min": 0.01,
    "grid_max": 100.0,
    "grid_points": 200,
    "grid_spacing": "log",
    "format": "csv",
    "horizon": 1.0,
    "passage_x": 2.0,
    "t_min": 1e-3,
    "t_max": 1e3,
    "t_points": 120,
    "derivatives": 0,
    "p_up": False,
    "exponent_tol": 0.15,
    "constant_tol": 0.20,
    "meander_constant_tol": 0.25,
    "tight_exponent_tol": 0.10,
    "tight_constant_tol": 0.10,
    "pup_exponent_tol": 0.20,
    "stderr_multiplier": 2.0,
    "kde_bandwidth_rule": "silverman-log",
}

# =============================================================================
# SETTINGS CLASS
# =============================================================================
# Container class for settings access.
# Import: from config.settings import SETTINGS


class Settings:
    """
    Application settings container.

    Usage:
        from config.settings import SETTINGS

        print(SETTINGS.OUTPUT_DIR)
        print(SETTINGS.RUN_DEFAULTS["levels"])
    """

    # Paths
    BASE_DIR = BASE_DIR
    OUTPUT_DIR = OUTPUT_DIR

    # Logging
    LOG_LEVEL = LOG_LEVEL

    # Monte Carlo
    WORKERS = WORKERS
    BLOCK_PATHS = BLOCK_PATHS
    MIN_ACCEPTANCE_RATE = MIN_ACCEPTANCE_RATE

    # Numerics
    QUAD_TOL = QUAD_TOL
    TRUNCATION_TOL = TRUNCATION_TOL
    JACOBI_NODES = JACOBI_NODES

    # Run defaults
    RUN_DEFAULTS = RUN_DEFAULTS


# Global settings instance
SETTINGS = Settings()
