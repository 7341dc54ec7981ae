"""
Bipartite density matrices and projective measurement bases.

This module handles construction and validation of states of a system S
paired with an apparatus A, the named states, parametric
families, seeded random states and bases, and the unread-measurement
(dephasing) channel.
"""
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.stats import unitary_group

from core.errors import DimensionError, DomainError, ValidationError
from core.qmat import (
    Subsystem,
    as_complex_matrix,
    eig_hermitian,
    hermiticity_defect,
    partial_trace,
    tensor,
)
from config import (
    HERMITIAN_TOLERANCE,
    MAX_DIMENSION,
    ORTHONORMAL_TOLERANCE,
    PSD_TOLERANCE,
    TRACE_TOLERANCE,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Validated state of the pair S (x) A.

    A single-system state is a DensityMatrix with d_a = 1.

    Attributes:
        matrix: Read-only (d_s * d_a) square complex matrix
        d_s: Dimension of the system S
        d_a: Dimension of the apparatus A

    Raises:
        ValidationError: Naming the violated invariant (dimension split,
            hermitian, unit trace or positive semidefinite)
    """

    matrix: np.ndarray
    d_s: int
    d_a: int

    def __post_init__(self):
        d_s, d_a = int(self.d_s), int(self.d_a)
        if d_s < 1 or d_a < 1:
            raise DimensionError(
                f"Subsystem dimensions must be positive, got ({d_s}, {d_a})",
                invariant="positive dimensions",
            )
        matrix = as_complex_matrix(self.matrix)
        if matrix.shape[0] != d_s * d_a:
            raise DimensionError(
                f"Matrix dimension {matrix.shape[0]} != d_S * d_A = {d_s * d_a}",
                invariant="dim = d_S * d_A",
            )
        defect = hermiticity_defect(matrix)
        if defect > HERMITIAN_TOLERANCE:
            raise ValidationError(
                f"Density matrix is not Hermitian (defect {defect:.3e})",
                invariant="hermitian",
            )
        trace = np.trace(matrix).real
        if abs(trace - 1.0) > TRACE_TOLERANCE:
            raise ValidationError(
                f"Density matrix trace is {trace:.12g}, expected 1",
                invariant="unit trace",
            )
        lowest = eig_hermitian(matrix).eigenvalues[0]
        if lowest < -PSD_TOLERANCE:
            raise ValidationError(
                f"Density matrix has negative eigenvalue {lowest:.3e}",
                invariant="positive semidefinite",
            )
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "d_s", d_s)
        object.__setattr__(self, "d_a", d_a)

    @classmethod
    def from_clipped(cls, matrix, d_s, d_a=1):
        """
        Build a state from a nearly valid matrix.

        The matrix is symmetrized, negative eigenvalues are set to zero
        and the result is renormalized to unit trace.
        """
        m = np.asarray(matrix, dtype=np.complex128)
        m = 0.5 * (m + m.conj().T)
        values, vectors = np.linalg.eigh(m)
        values = np.clip(values, 0.0, None)
        total = values.sum()
        if total <= 0.0:
            raise ValidationError("Matrix has no positive spectral weight", invariant="unit trace")
        m = (vectors * (values / total)) @ vectors.conj().T
        return cls(0.5 * (m + m.conj().T), d_s, d_a)

    @property
    def dim(self):
        return self.d_s * self.d_a

    @property
    def dims(self):
        return (self.d_s, self.d_a)

    @cached_property
    def eigenvalues(self):
        """Ascending spectrum with values in [-PSD_TOLERANCE, 0) set to zero."""
        values = np.clip(eig_hermitian(self.matrix).eigenvalues, 0.0, None)
        values.setflags(write=False)
        return values

    def purity(self):
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def marginal(self, keep):
        """Reduced state of one subsystem as a single-system DensityMatrix."""
        keep = Subsystem.parse(keep)
        reduced = partial_trace(self.matrix, self.dims, keep)
        dim = self.d_s if keep is Subsystem.S else self.d_a
        return DensityMatrix.from_clipped(reduced, dim, 1)

    def __repr__(self):
        return f"DensityMatrix(d_s={self.d_s}, d_a={self.d_a})"


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """
    Complete orthonormal basis {|A_k>} for a rank-1 projective measurement.

    Attributes:
        vectors: Read-only unitary matrix whose column k is |A_k>
        label: Optional display name
    """

    vectors: np.ndarray
    label: str = ""

    def __post_init__(self):
        vectors = as_complex_matrix(self.vectors)
        gram = vectors.conj().T @ vectors
        defect = float(np.max(np.abs(gram - np.eye(vectors.shape[0]))))
        if defect > ORTHONORMAL_TOLERANCE:
            raise ValidationError(
                f"Basis vectors are not orthonormal (Gram defect {defect:.3e})",
                invariant="orthonormal",
            )
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def from_unitary(cls, unitary, label=""):
        """Basis whose vector k is column k of a unitary matrix."""
        return cls(np.array(unitary, dtype=np.complex128, copy=True), label)

    @classmethod
    def computational(cls, d_a=2):
        return cls(np.eye(d_a, dtype=np.complex128), "computational")

    @classmethod
    def hadamard(cls):
        return cls(np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2), "hadamard")

    @classmethod
    def circular(cls):
        return cls(np.array([[1, 1], [1j, -1j]], dtype=np.complex128) / np.sqrt(2), "circular")

    @property
    def d_a(self):
        return self.vectors.shape[0]

    def vector(self, k):
        return self.vectors[:, k]

    def projectors(self):
        """Rank-1 projectors |A_k><A_k| in outcome order."""
        return [np.outer(self.vector(k), self.vector(k).conj()) for k in range(self.d_a)]

    def overlaps(self, other):
        """Matrix of |<A_j|B_k>|^2 between this basis and another."""
        return np.abs(self.vectors.conj().T @ other.vectors) ** 2

    def __repr__(self):
        name = self.label or "custom"
        return f"MeasurementBasis({name}, d_a={self.d_a})"


def pure_state(vector, d_a=1):
    """
    Projector onto a normalized state vector.

    Args:
        vector: Amplitudes, normalized here
        d_a: Apparatus dimension if the vector lives on S (x) A

    Raises:
        DomainError: If the vector has zero norm
    """
    v = np.asarray(vector, dtype=np.complex128).ravel()
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise DomainError("Cannot build a state from the zero vector")
    v = v / norm
    if v.size % d_a:
        raise DimensionError(f"Vector length {v.size} is not a multiple of d_A = {d_a}")
    return DensityMatrix(np.outer(v, v.conj()), v.size // d_a, d_a)


def make_bell():
    """(|00> + |11>)/sqrt(2), S first and A second."""
    psi = np.zeros(4, dtype=np.complex128)
    psi[0] = psi[3] = 1.0 / np.sqrt(2)
    return DensityMatrix(np.outer(psi, psi.conj()), 2, 2)


def make_classical_mixture():
    """(|00><00| + |11><11|)/2."""
    return DensityMatrix(np.diag([0.5, 0.0, 0.0, 0.5]).astype(np.complex128), 2, 2)


def make_maximally_mixed(d_s=2, d_a=2):
    dim = d_s * d_a
    if dim > MAX_DIMENSION:
        raise DimensionError(f"Dimension {dim} exceeds the configured maximum {MAX_DIMENSION}")
    return DensityMatrix(np.eye(dim, dtype=np.complex128) / dim, d_s, d_a)


def _check_unit_interval(name, value):
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value}", invariant=f"0 <= {name} <= 1")
    return value


def make_werner(z):
    """
    z * rho_Bell + (1 - z) * I/4, built on the (|00> + |11>)/sqrt(2) Bell state.

    Raises:
        DomainError: If z is outside [0, 1]
    """
    z = _check_unit_interval("z", z)
    bell = make_bell().matrix
    return DensityMatrix(z * bell + (1.0 - z) * np.eye(4) / 4.0, 2, 2)


def make_dephased_bell(p):
    """
    Bell state partially dephased on A in the computational basis.

    p = 0 gives the Bell state and p = 1 the classical mixture.
    """
    p = _check_unit_interval("p", p)
    bell = make_bell()
    dephased = decohere(bell, MeasurementBasis.computational(2))
    return DensityMatrix((1.0 - p) * bell.matrix + p * dephased.matrix, 2, 2)


def make_product(rho_s, rho_a):
    """rho_S (x) rho_A from two single-system states."""
    for rho in (rho_s, rho_a):
        if rho.d_a != 1:
            raise DimensionError("make_product expects single-system states (d_a = 1)")
    return DensityMatrix(tensor(rho_s.matrix, rho_a.matrix), rho_s.dim, rho_a.dim)


def make_one_way(rho0, rho1):
    """
    1/2 (rho0 (x) |0><0| + rho1 (x) |1><1|) with the classical register on A.

    Args:
        rho0: Single-system state of S attached to outcome 0
        rho1: Single-system state of S attached to outcome 1

    Raises:
        DimensionError: If the two states are not single-system states of
            the same dimension
    """
    if rho0.d_a != 1 or rho1.d_a != 1:
        raise DimensionError("make_one_way expects single-system states (d_a = 1)")
    if rho0.d_s != rho1.d_s:
        raise DimensionError(
            f"Conditional states differ in dimension ({rho0.d_s} vs {rho1.d_s})",
            invariant="equal d_S",
        )
    zero = np.diag([1.0, 0.0]).astype(np.complex128)
    one = np.diag([0.0, 1.0]).astype(np.complex128)
    matrix = 0.5 * (tensor(rho0.matrix, zero) + tensor(rho1.matrix, one))
    return DensityMatrix(matrix, rho0.d_s, 2)


def _check_dims(d_s, d_a):
    if d_s < 1 or d_a < 1:
        raise DimensionError(f"Subsystem dimensions must be positive, got ({d_s}, {d_a})")
    if d_s * d_a > MAX_DIMENSION:
        raise DimensionError(
            f"Dimension {d_s * d_a} exceeds the configured maximum {MAX_DIMENSION}",
            invariant="max-dimension",
        )


def random_state(d_s, d_a, seed):
    """
    Seeded Ginibre (Hilbert-Schmidt) random state G G^dagger / Tr(G G^dagger).

    Algorithm: numpy.random.default_rng(seed) (PCG64) draws the d x d real
    parts as standard normals, then the d x d imaginary parts, row-major.
    Identical seeds give bit-identical states.
    """
    _check_dims(d_s, d_a)
    dim = d_s * d_a
    rng = np.random.default_rng(seed)
    real = rng.standard_normal((dim, dim))
    imag = rng.standard_normal((dim, dim))
    g = real + 1j * imag
    gg = g @ g.conj().T
    gg = 0.5 * (gg + gg.conj().T)
    logger.debug("Drew Ginibre state (%d, %d) from seed %r", d_s, d_a, seed)
    return DensityMatrix(gg / np.trace(gg).real, d_s, d_a)


def random_basis(d_a, seed):
    """Haar-random measurement basis from a seeded generator."""
    if d_a == 1:
        return MeasurementBasis.from_unitary(np.ones((1, 1)), "random")
    rng = np.random.default_rng(seed)
    return MeasurementBasis.from_unitary(unitary_group.rvs(d_a, random_state=rng), "random")


def decohere(rho, basis):
    """
    Outcome-averaged state after an unread measurement of A.

    Returns sum_k (1_S (x) P_k) rho (1_S (x) P_k) for P_k = |A_k><A_k|.

    Raises:
        DimensionError: If the basis does not act on A
    """
    if basis.d_a != rho.d_a:
        raise DimensionError(
            f"Basis dimension {basis.d_a} does not match d_A = {rho.d_a}",
            invariant="basis.d_A = rho.d_A",
        )
    identity = np.eye(rho.d_s, dtype=np.complex128)
    result = np.zeros_like(rho.matrix)
    for projector in basis.projectors():
        lifted = np.kron(identity, projector)
        result += lifted @ rho.matrix @ lifted
    return DensityMatrix(0.5 * (result + result.conj().T), rho.d_s, rho.d_a)


def swap_subsystems(rho):
    """Reorder S (x) A as A (x) S so the former S becomes the measured side."""
    blocks = rho.matrix.reshape(rho.d_s, rho.d_a, rho.d_s, rho.d_a)
    swapped = blocks.transpose(1, 0, 3, 2).reshape(rho.dim, rho.dim)
    return DensityMatrix(swapped, rho.d_a, rho.d_s)


def oriented(rho, side):
    """Return rho arranged so that the given side is the measured (second) one."""
    return rho if Subsystem.parse(side) is Subsystem.A else swap_subsystems(rho)
