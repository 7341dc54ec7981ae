"""
Configuration settings for the Discord Demon Engine.

This module centralizes all numerical tolerances, dimension limits,
optimizer and engine settings used throughout the application.
"""
from pathlib import Path

# ============================================================================
# Project Paths
# ============================================================================
PROJECT_ROOT = Path(__file__).parent.absolute()

# ============================================================================
# Numerical Tolerances
# ============================================================================
HERMITIAN_TOLERANCE = 1e-9      # max |m - m^dagger| entry
TRACE_TOLERANCE = 1e-9
PSD_TOLERANCE = 1e-9            # smallest eigenvalue allowed is -PSD_TOLERANCE
ORTHONORMAL_TOLERANCE = 1e-9    # Gram matrix vs identity
RECONSTRUCTION_TOLERANCE = 1e-9
NEGLIGIBLE_PROBABILITY = 1e-12  # outcomes below this are left out of averages
TIE_TOLERANCE = 1e-12           # objective values closer than this are ties
IDENTITY_TOLERANCE = 1e-9       # cross-checks between independent code paths

# ============================================================================
# Dimensions
# ============================================================================
MAX_DIMENSION = 1024
MAX_OPTIMIZE_DIMENSION = 4      # largest measured side the basis search accepts

# ============================================================================
# Basis Optimizer
# ============================================================================
GRID_THETA_POINTS = 64
GRID_PHI_POINTS = 64
SIMPLEX_FATOL = 1e-10
SIMPLEX_XATOL = 1e-10
SIMPLEX_MAX_EVALUATIONS = 2000
RANDOM_RESTARTS = 50            # qudit (d > 2) searches only
OPTIMIZER_SEED = 20020601

# ============================================================================
# Demon Engine
# ============================================================================
DEFAULT_ENGINE_STEPS = 100_000
DEFAULT_SEED = 0
PROGRESS_INTERVAL = 25_000      # steps between progress log lines

# ============================================================================
# Output
# ============================================================================
SIGNIFICANT_DIGITS = 9
ZERO_SNAP = 1e-12               # printed values below this show as 0
DEFAULT_WORKERS = 1

# ============================================================================
# Logging
# ============================================================================
LOG_LEVEL = "WARNING"
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

# ============================================================================
# Backend Requirements
# ============================================================================
MIN_NUMPY_VERSION = (1, 24)
MIN_SCIPY_VERSION = (1, 10)
