"""
State file reading and writing.

A state file is a JSON document:

    {"d_s": 2, "d_a": 2, "matrix": [[[re, im], ...], ...]}

with the matrix stored row-major as [re, im] pairs. Loading applies every
DensityMatrix invariant.
"""
import json
import logging
from pathlib import Path

import numpy as np

from core.errors import ValidationError
from core.states import DensityMatrix

logger = logging.getLogger(__name__)


def state_to_document(rho):
    """Plain-data representation of a state."""
    return {
        "d_s": rho.d_s,
        "d_a": rho.d_a,
        "matrix": [
            [[float(z.real), float(z.imag)] for z in row] for row in rho.matrix
        ],
    }


def state_from_document(document):
    """
    Parse and validate a state document.

    Raises:
        ValidationError: If a field is missing or malformed, or the matrix
            violates a DensityMatrix invariant
    """
    if not isinstance(document, dict):
        raise ValidationError("State document must be a JSON object", invariant="format")
    for field in ("d_s", "d_a", "matrix"):
        if field not in document:
            raise ValidationError(f"State document is missing '{field}'", invariant="format")
    try:
        pairs = np.asarray(document["matrix"], dtype=float)
        d_s, d_a = int(document["d_s"]), int(document["d_a"])
    except (TypeError, ValueError) as e:
        raise ValidationError(f"Malformed state document: {e}", invariant="format") from e
    if pairs.ndim != 3 or pairs.shape[-1] != 2:
        raise ValidationError(
            "Field 'matrix' must be a dim x dim array of [re, im] pairs",
            invariant="format",
        )
    return DensityMatrix(pairs[..., 0] + 1j * pairs[..., 1], d_s, d_a)


def save_state(rho, path):
    """Write rho to path in the state file format."""
    path = Path(path)
    with open(path, "w") as f:
        json.dump(state_to_document(rho), f)
        f.write("\n")
    logger.info("Saved %r to %s", rho, path)


def load_state(path):
    """
    Read and validate a state file.

    Raises:
        ValidationError: If the file cannot be parsed or the state is invalid
    """
    path = Path(path)
    try:
        with open(path, "r") as f:
            document = json.load(f)
    except OSError as e:
        raise ValidationError(f"Cannot read state file {path}: {e}", invariant="readable") from e
    except json.JSONDecodeError as e:
        raise ValidationError(f"State file {path} is not valid JSON: {e}", invariant="format") from e
    rho = state_from_document(document)
    logger.info("Loaded %r from %s", rho, path)
    return rho
