"""
Dense complex linear algebra for small Hermitian matrices.

Matrices are plain complex128 numpy arrays marked read-only after
validation. Bipartite index convention: basis vector |s>|a> sits at row
s * d_A + a (S-major, A-minor), which is numpy's Kronecker ordering.
"""
import enum
from dataclasses import dataclass

import numpy as np

from core.errors import ContractViolationError, DimensionError, ValidationError
from config import HERMITIAN_TOLERANCE, MAX_DIMENSION


class Subsystem(enum.Enum):
    """Tag for one end of a bipartite pair."""

    S = "S"
    A = "A"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValidationError(
                f"Unknown subsystem '{value}', expected 'S' or 'A'",
                invariant="subsystem-tag",
            ) from None

    def other(self):
        return Subsystem.A if self is Subsystem.S else Subsystem.S


@dataclass(frozen=True, eq=False)
class HermitianEigenDecomposition:
    """
    Spectral decomposition of a Hermitian matrix.

    Attributes:
        eigenvalues: Ascending real eigenvalues
        eigenvectors: Matrix whose columns are the orthonormal eigenvectors
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        """Return sum_l lambda_l v_l v_l^dagger."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _freeze(array):
    array.setflags(write=False)
    return array


def as_complex_matrix(m, max_dim=MAX_DIMENSION):
    """
    Validate and return a read-only square complex matrix.

    Args:
        m: Array-like square matrix
        max_dim: Largest accepted dimension

    Returns:
        numpy.ndarray: complex128 copy of m

    Raises:
        DimensionError: If m is not square or exceeds max_dim
        ValidationError: If any entry is NaN or infinite
    """
    array = np.array(m, dtype=np.complex128)
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
        raise DimensionError(
            f"Expected a non-empty square matrix, got shape {array.shape}",
            invariant="square",
        )
    if array.shape[0] > max_dim:
        raise DimensionError(
            f"Dimension {array.shape[0]} exceeds the configured maximum {max_dim}",
            invariant="max-dimension",
        )
    if not np.all(np.isfinite(array)):
        raise ValidationError("Matrix contains NaN or infinite entries", invariant="finite")
    return _freeze(array)


def hermiticity_defect(m):
    """Largest absolute entry of m - m^dagger."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def is_hermitian(m, tol=HERMITIAN_TOLERANCE):
    return hermiticity_defect(m) <= tol


def tensor(a, b, max_dim=MAX_DIMENSION):
    """
    Kronecker product a (x) b with a as the major index.

    Raises:
        DimensionError: If the product dimension exceeds max_dim
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    dim = a.shape[0] * b.shape[0]
    if dim > max_dim:
        raise DimensionError(
            f"Tensor product dimension {dim} exceeds the configured maximum {max_dim}",
            invariant="max-dimension",
        )
    return _freeze(np.kron(a, b))


def partial_trace(m, dims, keep):
    """
    Trace out one subsystem of a bipartite operator.

    Args:
        m: (d_S * d_A) square matrix
        dims: Tuple (d_S, d_A)
        keep: Subsystem to keep

    Returns:
        numpy.ndarray: d_S x d_S (keep S) or d_A x d_A (keep A) marginal

    Raises:
        DimensionError: If m does not match dims
    """
    m = np.asarray(m)
    d_s, d_a = (int(d) for d in dims)
    if m.ndim != 2 or m.shape != (d_s * d_a, d_s * d_a):
        raise DimensionError(
            f"Matrix of shape {m.shape} does not split as ({d_s}, {d_a})",
            invariant="dim = d_S * d_A",
        )
    blocks = m.reshape(d_s, d_a, d_s, d_a)
    if Subsystem.parse(keep) is Subsystem.S:
        reduced = np.einsum("iaja->ij", blocks)
    else:
        reduced = np.einsum("sasb->ab", blocks)
    return _freeze(np.ascontiguousarray(reduced))


def eig_hermitian(m, tol=HERMITIAN_TOLERANCE):
    """
    Eigendecomposition of a Hermitian matrix with ascending eigenvalues.

    LAPACK's divide-and-conquer solver behind numpy.linalg.eigh is
    deterministic for a fixed input on a fixed build.

    Raises:
        ContractViolationError: If m is not Hermitian within tol
    """
    m = np.asarray(m, dtype=np.complex128)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise ContractViolationError(
            f"Matrix is not Hermitian (max |m - m^dagger| = {defect:.3e})",
            invariant="hermitian",
        )
    values, vectors = np.linalg.eigh(0.5 * (m + m.conj().T))
    return HermitianEigenDecomposition(_freeze(values), _freeze(vectors))
