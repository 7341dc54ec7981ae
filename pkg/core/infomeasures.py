"""
Information measures of a bipartite state at a fixed measurement basis.

All entropies are in bits. The apparatus A is the measured side; use
states.swap_subsystems (or states.oriented) to measure S instead.
"""
import logging
from dataclasses import dataclass

import numpy as np

from core.errors import DimensionError, NumericalError
from core.qmat import Subsystem, partial_trace
from core.states import DensityMatrix, MeasurementBasis
from config import IDENTITY_TOLERANCE, NEGLIGIBLE_PROBABILITY, PSD_TOLERANCE

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConditionalOutcome:
    """
    One outcome k of a measurement on A.

    Attributes:
        probability: p_A(k)
        state: Conditional state of S given outcome k
        negligible: True if p_A(k) fell below the negligible threshold, in
            which case state is the maximally mixed placeholder
    """

    probability: float
    state: DensityMatrix
    negligible: bool = False


@dataclass(frozen=True)
class ConditionalEnsemble:
    """Ordered outcomes {(p_A(k), rho_S|A_k)} of a measurement on A."""

    outcomes: tuple

    @property
    def probabilities(self):
        return np.array([o.probability for o in self.outcomes])

    def __len__(self):
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)


@dataclass(frozen=True)
class InfoReport:
    """
    Scalar measures of one state at one measurement basis, in bits.

    h_a is the entropy of the unmeasured A marginal and enters the mutual
    information. h_a_measured is the entropy of the outcome distribution
    {p_A(k)} and enters h_measured_joint = h_a_measured + h_s_given_a.
    """

    h_s: float
    h_a: float
    h_sa: float
    h_s_given_a: float
    h_a_measured: float
    h_measured_joint: float
    i_mutual: float
    j_asym: float
    discord: float
    basis: MeasurementBasis

    @property
    def discord_unmeasured_marginal(self):
        """Discord with the unmeasured H(A) inside the measured-joint bracket."""
        return self.h_a + self.h_s_given_a - self.h_sa

    def as_dict(self):
        return {
            "h_s": self.h_s,
            "h_a": self.h_a,
            "h_sa": self.h_sa,
            "h_s_given_a": self.h_s_given_a,
            "h_measured_joint": self.h_measured_joint,
            "i_mutual": self.i_mutual,
            "j_asym": self.j_asym,
            "discord": self.discord,
        }


def shannon_entropy(probabilities):
    """
    Shannon entropy in bits with 0 log 0 = 0.

    Works along the last axis, so a stack of distributions gives a stack
    of entropies. Negative entries (floating-point drift) count as zero.
    """
    p = np.clip(np.asarray(probabilities, dtype=float), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0.0, -p * np.log2(np.where(p > 0.0, p, 1.0)), 0.0)
    return terms.sum(axis=-1)


def spectral_entropy(matrix):
    """von Neumann entropy of a Hermitian, positive semidefinite matrix."""
    return float(shannon_entropy(np.linalg.eigvalsh(np.asarray(matrix))))


def von_neumann_entropy(rho):
    """
    -Tr rho lg rho over the clipped spectrum.

    Args:
        rho: DensityMatrix

    Returns:
        float: Entropy in [0, lg dim]
    """
    return float(shannon_entropy(rho.eigenvalues))


def _check_basis(rho, basis):
    if basis.d_a != rho.d_a:
        raise DimensionError(
            f"Basis dimension {basis.d_a} does not match d_A = {rho.d_a}",
            invariant="basis.d_A = rho.d_A",
        )


def condition_on_measurement(rho, basis):
    """
    Outcome probabilities and conditional states of S for a measurement on A.

    p_A(k) = Tr <A_k|rho|A_k> and rho_S|A_k = <A_k|rho|A_k> / p_A(k).
    Outcomes with p_A(k) below NEGLIGIBLE_PROBABILITY carry the maximally
    mixed state of S and are flagged negligible.

    Raises:
        DimensionError: If the basis does not act on A
    """
    _check_basis(rho, basis)
    blocks = rho.matrix.reshape(rho.d_s, rho.d_a, rho.d_s, rho.d_a)
    placeholder = DensityMatrix(np.eye(rho.d_s, dtype=np.complex128) / rho.d_s, rho.d_s, 1)
    outcomes = []
    for k in range(basis.d_a):
        v = basis.vector(k)
        block = np.einsum("a,satb,b->st", v.conj(), blocks, v)
        probability = float(np.trace(block).real)
        if probability < NEGLIGIBLE_PROBABILITY:
            outcomes.append(ConditionalOutcome(max(probability, 0.0), placeholder, True))
            continue
        state = DensityMatrix.from_clipped(block / probability, rho.d_s, 1)
        outcomes.append(ConditionalOutcome(probability, state))
    return ConditionalEnsemble(tuple(outcomes))


def _ensemble_conditional_entropy(ensemble):
    return float(sum(
        o.probability * von_neumann_entropy(o.state) for o in ensemble if not o.negligible
    ))


def conditional_entropy(rho, basis):
    """H(S|A) = sum_k p_A(k) H(rho_S|A_k) for the given basis on A."""
    return _ensemble_conditional_entropy(condition_on_measurement(rho, basis))


def measured_joint_entropy(rho, basis):
    """[H(A) + H(S|A)] evaluated with the outcome distribution of the basis."""
    ensemble = condition_on_measurement(rho, basis)
    return float(shannon_entropy(ensemble.probabilities)) + _ensemble_conditional_entropy(ensemble)


def measurement_entropies(rho, unitaries):
    """
    Vectorized outcome and conditional entropies for a stack of bases.

    Args:
        rho: DensityMatrix measured on A
        unitaries: Array (n, d_A, d_A) whose columns are basis vectors

    Returns:
        tuple: (outcome entropies H(A'), conditional entropies H(S|A)),
            each an array of length n
    """
    u = np.asarray(unitaries, dtype=np.complex128)
    if u.ndim == 2:
        u = u[np.newaxis]
    if u.shape[1:] != (rho.d_a, rho.d_a):
        raise DimensionError(
            f"Bases of shape {u.shape[1:]} do not act on d_A = {rho.d_a}",
            invariant="basis.d_A = rho.d_A",
        )
    blocks = rho.matrix.reshape(rho.d_s, rho.d_a, rho.d_s, rho.d_a)
    # conditional blocks <A_k|rho|A_k>, shape (n, k, d_S, d_S)
    cond = np.einsum("nak,satb,nbk->nkst", u.conj(), blocks, u)
    cond = 0.5 * (cond + np.conj(np.swapaxes(cond, -1, -2)))
    probabilities = np.clip(np.trace(cond, axis1=-2, axis2=-1).real, 0.0, None)
    kept = probabilities >= NEGLIGIBLE_PROBABILITY
    safe = np.where(kept, probabilities, 1.0)
    spectra = np.linalg.eigvalsh(cond / safe[..., np.newaxis, np.newaxis])
    per_outcome = np.where(kept, shannon_entropy(spectra), 0.0)
    return shannon_entropy(probabilities), np.sum(probabilities * per_outcome, axis=-1)


def info_report(rho, basis):
    """
    Every scalar measure of rho at the given basis on A.

    Raises:
        DimensionError: If the basis does not act on A
        NumericalError: If a report identity fails, which indicates a
            numerical breakdown rather than bad input
    """
    ensemble = condition_on_measurement(rho, basis)
    h_s = spectral_entropy(partial_trace(rho.matrix, rho.dims, Subsystem.S))
    h_a = spectral_entropy(partial_trace(rho.matrix, rho.dims, Subsystem.A))
    h_sa = von_neumann_entropy(rho)
    h_s_given_a = _ensemble_conditional_entropy(ensemble)
    h_a_measured = float(shannon_entropy(ensemble.probabilities))
    h_measured_joint = h_a_measured + h_s_given_a
    i_mutual = h_s + h_a - h_sa
    j_asym = h_s + h_a - h_measured_joint
    report = InfoReport(
        h_s=h_s,
        h_a=h_a,
        h_sa=h_sa,
        h_s_given_a=h_s_given_a,
        h_a_measured=h_a_measured,
        h_measured_joint=h_measured_joint,
        i_mutual=i_mutual,
        j_asym=j_asym,
        discord=i_mutual - j_asym,
        basis=basis,
    )
    if abs(report.discord - (h_measured_joint - h_sa)) > IDENTITY_TOLERANCE:
        raise NumericalError("discord != h_measured_joint - h_sa")
    if report.discord < -PSD_TOLERANCE:
        raise NumericalError(f"Negative discord {report.discord:.3e} for {basis!r}")
    logger.debug("info_report %r at %r: discord=%.12g", rho, basis, report.discord)
    return report
