"""
Work accounting for classical and quantum Maxwell's demons.

All work values are in units of k_B2 T, the Boltzmann constant adapted to
entropies in bits times the bath temperature. A classical demon measures
the apparatus A in a chosen basis; a quantum demon measures in the global
eigenbasis of the pair. The Monte Carlo engine replays the classical
demon step by step with ideal Shannon code lengths standing in for the
algorithmic complexity of the outcome record.
"""
import logging
import math
import zlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.basisopt import min_discord
from core.errors import DomainError, NumericalError
from core.infomeasures import (
    condition_on_measurement,
    info_report,
    shannon_entropy,
    von_neumann_entropy,
)
from core.qmat import Subsystem, eig_hermitian
from core.states import oriented
from config import IDENTITY_TOLERANCE, PROGRESS_INTERVAL

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WorkReport:
    """
    Demon work accounting for one state and one basis on A.

    Attributes:
        w_plus: Work extracted from S given the outcome, lg d_S - H(S|A)
        w_minus: Erasure cost of the outcome record, H(A)
        delta_mu: Memory freed per step by compressing the record
        w_naive: Net gain when a whole memory block is spent per step
        w_classical: Net gain of the compressing local demon
        w_quantum: Net gain of the global demon
        delta_w: Extra work of the global demon over the local one
        basis: Basis the classical demon measures
    """

    w_plus: float
    w_minus: float
    delta_mu: float
    w_naive: float
    w_classical: float
    w_quantum: float
    delta_w: float
    basis: object

    def as_dict(self):
        return {
            "w_plus": self.w_plus,
            "w_minus": self.w_minus,
            "delta_mu": self.delta_mu,
            "w_naive": self.w_naive,
            "w_classical": self.w_classical,
            "w_quantum": self.w_quantum,
            "delta_w": self.delta_w,
        }


@dataclass(frozen=True)
class ClassicalDemonChoice:
    """Best local demon that may pick which end of the pair to measure."""

    side: Subsystem
    work: float
    argmin: object


@dataclass(frozen=True, eq=False)
class EngineTrace:
    """
    Record of a simulated demon engine run.

    Attributes:
        steps: Number of measurement cycles
        outcomes: Outcome index of each cycle
        work_samples: Net work credited in each cycle
        ideal_code_length: Total Shannon code length of the record, in bits
        net_work_per_step: Mean of work_samples (compressing demon)
        naive_work_per_step: Mean net work when every record is erased in full
        standard_error: Sample standard error of net_work_per_step
        seed: Generator seed
        compressed_bits_per_step: Record size after a general-purpose
            compressor, if requested
    """

    steps: int
    outcomes: np.ndarray
    work_samples: np.ndarray
    ideal_code_length: float
    net_work_per_step: float
    naive_work_per_step: float
    standard_error: float
    seed: int
    compressed_bits_per_step: Optional[float] = None

    def running_mean(self):
        return np.cumsum(self.work_samples) / np.arange(1, self.steps + 1)


def commuting_measurement(rho):
    """Global eigenbasis of rho, the measurement a quantum demon performs."""
    return eig_hermitian(rho.matrix)


def quantum_demon_work(rho):
    """lg d_SA - H(S,A), read off the global eigendecomposition."""
    spectrum = commuting_measurement(rho).eigenvalues
    return math.log2(rho.dim) - float(shannon_entropy(spectrum))


def work_report(rho, basis):
    """
    Work balance of the classical demon measuring A in basis, and of the
    quantum demon, for the fuel rho.

    The classical net gain is assembled from extraction, erasure and
    compression terms; its gap to the quantum demon is checked against
    the discord computed independently by infomeasures.

    Raises:
        DimensionError: If the basis does not act on A
        NumericalError: If the gap and the discord disagree
    """
    ensemble = condition_on_measurement(rho, basis)
    h_outcomes = float(shannon_entropy(ensemble.probabilities))
    h_conditional = float(sum(
        o.probability * von_neumann_entropy(o.state) for o in ensemble if not o.negligible
    ))
    w_plus = math.log2(rho.d_s) - h_conditional
    w_minus = h_outcomes
    delta_mu = math.log2(rho.d_a) - h_outcomes
    w_classical = w_plus + delta_mu
    w_quantum = quantum_demon_work(rho)
    delta_w = w_quantum - w_classical

    discord = info_report(rho, basis).discord
    if abs(delta_w - discord) > IDENTITY_TOLERANCE:
        raise NumericalError(
            f"Extra quantum work {delta_w:.12g} differs from discord {discord:.12g}"
        )
    return WorkReport(
        w_plus=w_plus,
        w_minus=w_minus,
        delta_mu=delta_mu,
        w_naive=w_plus - w_minus,
        w_classical=w_classical,
        w_quantum=w_quantum,
        delta_w=delta_w,
        basis=basis,
    )


def optimal_classical_work(rho, side=Subsystem.A):
    """
    Classical demon work at the discord-minimizing basis on the given side.

    Returns:
        tuple: (lg d_SA - (H(S,A) + delta_hat), BasisParams of that basis)
    """
    result = min_discord(rho, side)
    h_sa = von_neumann_entropy(oriented(rho, side))
    return math.log2(rho.dim) - (h_sa + result.value), result.argmin


def best_end_classical_work(rho):
    """Local demon free to measure either end; ties go to A."""
    forward, forward_args = optimal_classical_work(rho, Subsystem.A)
    backward, backward_args = optimal_classical_work(rho, Subsystem.S)
    if backward > forward + IDENTITY_TOLERANCE:
        return ClassicalDemonChoice(Subsystem.S, backward, backward_args)
    return ClassicalDemonChoice(Subsystem.A, forward, forward_args)


class EngineSimulator:
    """
    Monte Carlo replay of a classical demon engine.

    Each cycle samples an outcome k with probability p_A(k), credits
    lg d_S - H(rho_S|A_k) of extraction work, and reclaims lg d_A minus the
    ideal code length -lg p_A(k) of memory. The per-cycle average converges
    to lg d_S d_A - [H(A) + H(S|A)].
    """

    def __init__(self, rho, basis):
        """
        Args:
            rho: Fuel state, measured on A
            basis: Basis the demon measures
        """
        ensemble = condition_on_measurement(rho, basis)
        probabilities = np.array(
            [0.0 if o.negligible else o.probability for o in ensemble]
        )
        self.probabilities = probabilities / probabilities.sum()
        self.d_a = rho.d_a
        self.extraction = np.array(
            [math.log2(rho.d_s) - von_neumann_entropy(o.state) for o in ensemble]
        )
        with np.errstate(divide="ignore"):
            self.code_length = -np.log2(self.probabilities)

    def run(self, steps, seed, compress=False):
        """
        Simulate the engine for a number of cycles.

        Args:
            steps: Number of cycles, at least 1
            seed: Generator seed
            compress: Also compress the record with zlib for comparison

        Returns:
            EngineTrace: The simulated run

        Raises:
            DomainError: If steps < 1
        """
        steps = int(steps)
        if steps < 1:
            raise DomainError(f"steps must be at least 1, got {steps}")

        rng = np.random.default_rng(seed)
        outcomes = np.empty(steps, dtype=np.int64)
        done = 0
        while done < steps:
            chunk = min(PROGRESS_INTERVAL, steps - done)
            outcomes[done:done + chunk] = rng.choice(self.d_a, size=chunk, p=self.probabilities)
            done += chunk
            logger.info("Engine progress: %d/%d cycles", done, steps)

        code = self.code_length[outcomes]
        samples = self.extraction[outcomes] + math.log2(self.d_a) - code
        naive = self.extraction[outcomes] - code
        standard_error = float(np.std(samples, ddof=1) / math.sqrt(steps)) if steps > 1 else 0.0

        compressed = None
        if compress:
            width = np.uint8 if self.d_a <= 256 else np.uint32
            packed = zlib.compress(outcomes.astype(width).tobytes(), 9)
            compressed = 8.0 * len(packed) / steps

        outcomes.setflags(write=False)
        samples.setflags(write=False)
        return EngineTrace(
            steps=steps,
            outcomes=outcomes,
            work_samples=samples,
            ideal_code_length=float(code.sum()),
            net_work_per_step=float(samples.mean()),
            naive_work_per_step=float(naive.mean()),
            standard_error=standard_error,
            seed=seed,
            compressed_bits_per_step=compressed,
        )


def simulate_engine(rho, basis, steps, seed, compress=False):
    """Run an EngineSimulator for rho measured in basis."""
    return EngineSimulator(rho, basis).run(steps, seed, compress=compress)
