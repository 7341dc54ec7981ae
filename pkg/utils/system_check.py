"""
Numerical backend checker for the Discord Demon Engine.

This module verifies that numpy and scipy meet the minimum versions and
that the Hermitian eigensolver is reproducible, which the golden values
and seeded ensembles rely on.
"""
import logging

import numpy as np
import scipy

from config import MIN_NUMPY_VERSION, MIN_SCIPY_VERSION

logger = logging.getLogger(__name__)


def _version_tuple(version):
    parts = []
    for piece in version.split(".")[:2]:
        digits = "".join(ch for ch in piece if ch.isdigit())
        parts.append(int(digits) if digits else 0)
    return tuple(parts)


def check_versions():
    """
    Check installed numpy and scipy against the configured minimums.

    Returns:
        bool: True if both packages are recent enough
    """
    ok = True
    for name, installed, minimum in (
        ("numpy", np.__version__, MIN_NUMPY_VERSION),
        ("scipy", scipy.__version__, MIN_SCIPY_VERSION),
    ):
        if _version_tuple(installed) < minimum:
            logger.error(
                "%s %s is older than the required %s",
                name, installed, ".".join(map(str, minimum)),
            )
            ok = False
        else:
            logger.debug("Found %s %s", name, installed)
    return ok


def check_eigensolver_determinism(repeats=3):
    """
    Decompose a fixed Hermitian test matrix repeatedly and compare bits.

    Returns:
        bool: True if every repeat is bit-identical to the first
    """
    rng = np.random.default_rng(12345)
    g = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    sample = g + g.conj().T
    first_values, first_vectors = np.linalg.eigh(sample)
    for _ in range(repeats):
        values, vectors = np.linalg.eigh(sample.copy())
        if not (np.array_equal(values, first_values) and np.array_equal(vectors, first_vectors)):
            logger.error("Hermitian eigensolver is not reproducible on this build")
            return False
    return True


def verify_system_requirements():
    """
    Verify all numerical backend requirements are met.

    Returns:
        bool: True if all requirements are met, False otherwise.
    """
    if not (check_versions() and check_eigensolver_determinism()):
        logger.error("Numerical backend requirements not met")
        return False

    logger.info("All numerical backend requirements verified")
    return True
