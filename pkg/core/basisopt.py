"""
Measurement basis search for minimized discord.

Bases on the measured side are parametrized by Bloch angles (theta, phi)
for a qubit and by a fixed-order product of Givens rotations for larger
dimensions. Qubit searches evaluate a full angular grid then refine the
best cell with a Nelder-Mead simplex; larger dimensions use seeded random
restarts and only report an upper bound.
"""
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from core.errors import CapabilityError, DomainError
from core.infomeasures import measurement_entropies, spectral_entropy, von_neumann_entropy
from core.qmat import Subsystem, partial_trace
from core.states import MeasurementBasis, oriented
from config import (
    GRID_PHI_POINTS,
    GRID_THETA_POINTS,
    MAX_OPTIMIZE_DIMENSION,
    OPTIMIZER_SEED,
    RANDOM_RESTARTS,
    SIMPLEX_FATOL,
    SIMPLEX_MAX_EVALUATIONS,
    SIMPLEX_XATOL,
    TIE_TOLERANCE,
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BasisParams:
    """
    Coordinates of a measurement basis on a d_a-dimensional side.

    For d_a = 2 the values are (theta, phi) with theta in [0, pi] and phi in
    [0, 2 pi). For d_a > 2 they are (angle, phase) pairs, both in [0, 2 pi),
    one pair per plane (i, j), i < j, in lexicographic plane order. For
    d_a = 1 there are no values.
    """

    d_a: int
    values: tuple

    @property
    def theta(self):
        return self.values[0]

    @property
    def phi(self):
        return self.values[1]

    def rotations(self):
        """(i, j, angle, phase) for each Givens rotation, in application order."""
        planes = itertools.combinations(range(self.d_a), 2)
        pairs = zip(self.values[0::2], self.values[1::2])
        return [(i, j, angle, phase) for (i, j), (angle, phase) in zip(planes, pairs)]

    def as_dict(self):
        if self.d_a == 2:
            return {"theta": self.theta, "phi": self.phi}
        return {f"p{n}": value for n, value in enumerate(self.values)}


@dataclass(frozen=True)
class MinimizationResult:
    """
    Outcome of a basis search.

    Attributes:
        value: Minimized quantity in bits
        argmin: Parameters of the best basis found
        evaluations: Number of objective evaluations
        converged: Whether the simplex refinement met its tolerances
        certified: False when the value is an upper bound from random
            restarts rather than a grid-backed minimum
    """

    value: float
    argmin: BasisParams
    evaluations: int
    converged: bool
    certified: bool = True


@dataclass(frozen=True)
class DiscordAsymmetry:
    """Minimized discord measured from each end of the pair."""

    forward: MinimizationResult    # delta_hat(S|A), A measured
    backward: MinimizationResult   # delta_hat(A|S), S measured

    @property
    def polarization(self):
        return self.forward.value - self.backward.value


def parameter_count(d_a):
    return 0 if d_a == 1 else d_a * d_a - d_a


def _phase_fixed(unitary):
    """Make the first non-negligible entry of each column real and non-negative."""
    u = np.array(unitary, dtype=np.complex128)
    for k in range(u.shape[1]):
        column = u[:, k]
        lead = column[np.argmax(np.abs(column) > 1e-12)]
        if abs(lead) > 0.0:
            u[:, k] = column * (abs(lead) / lead)
    return u


def _qubit_unitary(theta, phi):
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    e = complex(math.cos(phi), math.sin(phi))
    return np.array([[c, s], [e * s, -e * c]], dtype=np.complex128)


def _givens_unitary(d_a, params):
    u = np.eye(d_a, dtype=np.complex128)
    for i, j, angle, phase in params.rotations():
        c, s = math.cos(angle), math.sin(angle)
        e = complex(math.cos(phase), math.sin(phase))
        g = np.eye(d_a, dtype=np.complex128)
        g[i, i], g[i, j] = c, -e.conjugate() * s
        g[j, i], g[j, j] = e * s, c
        u = g @ u
    return u


def _wrap(value):
    """Reduce an angle to [0, 2 pi)."""
    wrapped = float(np.mod(value, TWO_PI))
    # np.mod of a tiny negative angle rounds up to exactly 2 pi
    return 0.0 if wrapped >= TWO_PI else wrapped


def _fold(d_a, x):
    """Map unconstrained coordinates onto the canonical parameter ranges."""
    x = np.asarray(x, dtype=float)
    if d_a == 2:
        theta, phi = _wrap(x[0]), x[1]
        if theta > math.pi:
            theta, phi = TWO_PI - theta, phi + math.pi
        return BasisParams(2, (theta, _wrap(phi)))
    return BasisParams(d_a, tuple(_wrap(v) for v in x))


def _unitary(params):
    if params.d_a == 1:
        return np.ones((1, 1), dtype=np.complex128)
    if params.d_a == 2:
        return _qubit_unitary(params.theta, params.phi)
    return _givens_unitary(params.d_a, params)


def realize_basis(params, d_a=None):
    """
    Build the measurement basis described by params.

    For a qubit, |A_0> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> and
    |A_1> is its orthogonal complement; each vector's leading coefficient
    is made real and non-negative.

    Raises:
        DomainError: If a parameter is out of range or the count is wrong
    """
    d_a = params.d_a if d_a is None else d_a
    if params.d_a != d_a or len(params.values) != parameter_count(d_a):
        raise DomainError(
            f"Expected {parameter_count(d_a)} parameters for d_A = {d_a}, "
            f"got {len(params.values)}"
        )
    values = np.asarray(params.values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError("Basis parameters must be finite")
    if d_a == 2:
        if not 0.0 <= params.theta <= math.pi:
            raise DomainError(f"theta must lie in [0, pi], got {params.theta}")
        if not 0.0 <= params.phi < TWO_PI:
            raise DomainError(f"phi must lie in [0, 2 pi), got {params.phi}")
    elif np.any(values < 0.0) or np.any(values >= TWO_PI):
        raise DomainError("Givens angles and phases must lie in [0, 2 pi)")
    return MeasurementBasis(_phase_fixed(_unitary(params)))


class _Objective:
    """Counts evaluations of an entropy functional over bases."""

    def __init__(self, rho, partial):
        self.rho = rho
        self.partial = partial
        self.evaluations = 0

    def batch(self, unitaries):
        self.evaluations += len(unitaries)
        h_outcomes, h_conditional = measurement_entropies(self.rho, unitaries)
        return h_conditional if self.partial else h_outcomes + h_conditional

    def __call__(self, x):
        params = _fold(self.rho.d_a, x)
        return float(self.batch(_unitary(params)[np.newaxis])[0])


def _lexicographic_best(candidates):
    """Lowest value, ties broken by the lexicographically smallest parameters."""
    best = min(value for value, _ in candidates)
    tied = [params for value, params in candidates if value <= best + TIE_TOLERANCE]
    return min(tied, key=lambda p: p.values)


def _refine(objective, start):
    result = minimize(
        objective,
        np.asarray(start.values, dtype=float),
        method="Nelder-Mead",
        options={
            "xatol": SIMPLEX_XATOL,
            "fatol": SIMPLEX_FATOL,
            "maxfev": SIMPLEX_MAX_EVALUATIONS,
        },
    )
    return _fold(start.d_a, result.x), bool(result.success)


def _search_qubit(objective):
    thetas = np.linspace(0.0, math.pi, GRID_THETA_POINTS)
    phis = np.linspace(0.0, TWO_PI, GRID_PHI_POINTS, endpoint=False)
    grid = [BasisParams(2, (float(t), float(p))) for t in thetas for p in phis]
    values = objective.batch(np.stack([_unitary(p) for p in grid]))
    start = _lexicographic_best(list(zip(values, grid)))
    start_value = objective(start.values)

    refined, converged = _refine(objective, start)
    refined_value = objective(refined.values)
    if refined_value < start_value - TIE_TOLERANCE:
        return refined, converged
    return start, converged


def _search_qudit(objective, d_a):
    rng = np.random.default_rng(OPTIMIZER_SEED)
    count = parameter_count(d_a)
    starts = [BasisParams(d_a, (0.0,) * count)]
    starts += [
        BasisParams(d_a, tuple(rng.uniform(0.0, TWO_PI, size=count)))
        for _ in range(RANDOM_RESTARTS)
    ]
    candidates = []
    for start in starts:
        refined, converged = _refine(objective, start)
        candidates.append((objective(refined.values), refined, converged))
    best = _lexicographic_best([(value, params) for value, params, _ in candidates])
    converged = next(c for _, p, c in candidates if p is best)
    logger.warning(
        "Basis search on d_A = %d is a random-restart upper bound, not a certified minimum",
        d_a,
    )
    return best, converged


def _minimize(rho, side, partial):
    rho = oriented(rho, side)
    d_a = rho.d_a
    if d_a > MAX_OPTIMIZE_DIMENSION:
        raise CapabilityError(
            f"Basis optimization supports a measured side of dimension at most "
            f"{MAX_OPTIMIZE_DIMENSION}, got {d_a}"
        )
    objective = _Objective(rho, partial)
    if d_a == 1:
        argmin, converged = BasisParams(1, ()), True
    elif d_a == 2:
        argmin, converged = _search_qubit(objective)
    else:
        argmin, converged = _search_qudit(objective, d_a)
    if not converged:
        logger.warning("Simplex refinement hit its evaluation limit on %r", rho)

    minimum = float(objective.batch(_unitary(argmin)[np.newaxis])[0])
    h_sa = von_neumann_entropy(rho)
    if partial:
        h_a = spectral_entropy(partial_trace(rho.matrix, rho.dims, Subsystem.A))
        value = h_a + minimum - h_sa
    else:
        value = minimum - h_sa
    logger.info(
        "%s on side %s: %.12g after %d evaluations",
        "min_partial_discord" if partial else "min_discord",
        Subsystem.parse(side).value, value, objective.evaluations,
    )
    return MinimizationResult(
        value=value,
        argmin=argmin,
        evaluations=objective.evaluations,
        converged=converged,
        certified=d_a <= 2,
    )


def min_discord(rho, side=Subsystem.A):
    """
    Discord minimized over projective bases on the measured side.

    min over bases of [H(A) + H(S|A)] - H(S,A), with H(A) taken from the
    outcome distribution. side=S measures S instead (roles swapped).

    Raises:
        CapabilityError: If the measured side exceeds MAX_OPTIMIZE_DIMENSION
    """
    return _minimize(rho, side, partial=False)


def min_partial_discord(rho, side=Subsystem.A):
    """
    H(A) + min over bases of H(S|A) - H(S,A), with the unmeasured H(A).

    Never exceeds min_discord for the same state and side.
    """
    return _minimize(rho, side, partial=True)


def discord_asymmetry(rho):
    """Minimized discord from both ends of the pair."""
    return DiscordAsymmetry(
        forward=min_discord(rho, Subsystem.A),
        backward=min_discord(rho, Subsystem.S),
    )


def polarization(rho):
    """delta_hat(S|A) - delta_hat(A|S); negative when measuring S discloses less."""
    return discord_asymmetry(rho).polarization
