"""
Pointwise steady-state numerics.

Jacobians are evaluated through N·diag(k·x^B)·Bᵗ·diag(1/x). When k and x are
rational and B is an integer matrix the Jacobian is built exactly and ranks
are exact; otherwise floating ranks use pivoted QR with a threshold relative
to the largest row norm.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
from dataclasses_json import dataclass_json

from .cone import extreme_rays
from .config import get_tolerance_config
from .errors import (
    AcrError,
    BuildError,
    DimensionError,
    DomainError,
    OracleFailure,
    SingularPointError,
)
from .exact import RationalMatrix, rank
from .network import PowerLawSystem

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, int, float]
Vector = Sequence[Scalar]


class Degeneracy(Enum):
    NONDEG = "NONDEG"
    DEG = "DEG"
    NONDEG_WRT_S = "NONDEG_WRT_S"
    DEG_WRT_S = "DEG_WRT_S"


class SensitivityMethod(Enum):
    CRAMER = "CRAMER"
    SOLVE = "SOLVE"


@dataclass(frozen=True)
class SteadyStatePoint:
    """An admitted positive steady state: g_k(x) = 0 up to the residual tolerance"""
    k: Tuple[Scalar, ...]
    x: Tuple[Scalar, ...]
    residual: float


@dataclass(frozen=True)
class AugmentedJacobian:
    """[∂g/∂x; W] at a point; exact is set when every input was rational"""
    matrix: np.ndarray
    s: int
    exact: Optional[RationalMatrix] = None


@dataclass_json
@dataclass
class DegeneracyClassification:
    plain: Degeneracy
    wrt_s: Degeneracy
    rank: int
    augmented_rank: int
    exact: bool


@dataclass_json
@dataclass
class SensitivityVector:
    """Sen_γ(x*) for one perturbation γ′(0) of the conserved totals"""
    values: List[float]
    perturbation: List[float]
    method: SensitivityMethod
    cramer: Optional[List[float]] = None
    cramer_gap: Optional[float] = None
    methods_agree: bool = True


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _numeric_B(system: PowerLawSystem) -> RationalMatrix:
    if system.is_symbolic:
        raise BuildError("pointwise numerics need a numeric exponent matrix B")
    return system.numeric_B


def _check_point(system: PowerLawSystem, k: Vector, x: Vector) -> None:
    if len(k) != system.r:
        raise DimensionError(f"{len(k)} rate constants for {system.r} reactions")
    if len(x) != system.n:
        raise DimensionError(f"{len(x)} concentrations for {system.n} species")
    if any(v <= 0 for v in k) or any(v <= 0 for v in x):
        raise DomainError("rate constants and concentrations must be strictly positive")


def _is_exact(values: Vector) -> bool:
    return all(isinstance(v, (Fraction, int)) and not isinstance(v, bool) for v in values)


def _exact_rates(system: PowerLawSystem, k: Vector, x: Vector) -> Optional[List[Fraction]]:
    B = _numeric_B(system)
    if not (_is_exact(k) and _is_exact(x) and B.is_integer()):
        return None
    rates = []
    for j in range(system.r):
        rate = Fraction(k[j])
        for l in range(system.n):
            if B[l, j]:
                rate *= Fraction(x[l]) ** int(B[l, j])
        rates.append(rate)
    return rates


def _float_rates(system: PowerLawSystem, k: Vector, x: Vector) -> np.ndarray:
    B = _numeric_B(system).to_numpy()
    x = np.asarray([float(v) for v in x])
    return np.asarray([float(v) for v in k]) * np.prod(x[:, None] ** B, axis=0)


def steady_state_residual(system: PowerLawSystem, k: Vector, x: Vector) -> np.ndarray:
    """g_k(x) as floats (computed exactly first when possible)."""
    _check_point(system, k, x)
    rates = _exact_rates(system, k, x)
    if rates is not None:
        return np.asarray([float(v) for v in system.N.apply(rates)])
    return system.N.to_numpy() @ _float_rates(system, k, x)


def exact_jacobian_at(system: PowerLawSystem, k: Vector, x: Vector) -> Optional[RationalMatrix]:
    """Exact ∂g/∂x, or None when k, x or B is not rational/integer."""
    _check_point(system, k, x)
    rates = _exact_rates(system, k, x)
    if rates is None:
        return None
    B = system.numeric_B
    rows = []
    for i in range(system.s):
        row = []
        for l in range(system.n):
            total = sum((system.N[i, j] * rates[j] * B[l, j] for j in range(system.r)), Fraction(0))
            row.append(total / Fraction(x[l]))
        rows.append(row)
    return RationalMatrix.from_rows(rows, ncols=system.n)


def jacobian_at(system: PowerLawSystem, k: Vector, x: Vector) -> np.ndarray:
    """
    ∂g/∂x = N·diag(k·x^B)·Bᵗ·diag(1/x) at a positive point.

    Raises:
        DomainError: If k or x has a non-positive entry
    """
    exact = exact_jacobian_at(system, k, x)
    if exact is not None:
        return exact.to_numpy()
    rates = _float_rates(system, k, x)
    B = system.numeric_B.to_numpy()
    x = np.asarray([float(v) for v in x])
    return system.N.to_numpy() @ np.diag(rates) @ B.T @ np.diag(1.0 / x)


def numeric_rank(matrix: np.ndarray, tol: Optional[float] = None,
                 scale: Optional[float] = None) -> int:
    """
    Rank from pivoted QR, counting |R_ii| > tol·scale.

    scale defaults to the largest row norm of matrix; pass the norm of the
    enclosing matrix when ranking a column subset of it.
    """
    tol = get_tolerance_config()["rank"] if tol is None else tol
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.size == 0:
        return 0
    if scale is None:
        scale = np.max(np.linalg.norm(matrix, axis=1))
    if scale == 0:
        return 0
    R, _ = scipy.linalg.qr(matrix, mode="r", pivoting=True)
    diagonal = np.abs(np.diag(R))
    return int(np.sum(diagonal > tol * scale))


def _conservation(system: PowerLawSystem, W: Optional[RationalMatrix]) -> RationalMatrix:
    W = system.W if W is None else W
    if W is None:
        raise BuildError("this computation needs a conservation matrix W")
    if W.shape != (system.d, system.n):
        raise DimensionError(f"W has shape {W.shape}, expected {(system.d, system.n)}")
    return W


def augmented_jacobian(system: PowerLawSystem, k: Vector, x: Vector,
                       W: Optional[RationalMatrix] = None) -> AugmentedJacobian:
    W = _conservation(system, W)
    exact = exact_jacobian_at(system, k, x)
    if exact is not None:
        stacked = exact.vstack(W)
        return AugmentedJacobian(stacked.to_numpy(), system.s, stacked)
    J = jacobian_at(system, k, x)
    return AugmentedJacobian(np.vstack([J, W.to_numpy().reshape(system.d, system.n)]), system.s)


def classify_degeneracy(system: PowerLawSystem, k: Vector, x: Vector,
                        W: Optional[RationalMatrix] = None,
                        tol: Optional[float] = None) -> DegeneracyClassification:
    """Plain degeneracy (rank ∂g/∂x < s) and degeneracy w.r.t. S (rank [∂g/∂x; W] < n)."""
    aug = augmented_jacobian(system, k, x, W)
    if aug.exact is not None:
        plain = rank(aug.exact.submatrix(rows=range(system.s)))
        full = rank(aug.exact)
    else:
        plain = numeric_rank(aug.matrix[:system.s], tol)
        full = numeric_rank(aug.matrix, tol)
    return DegeneracyClassification(
        plain=Degeneracy.DEG if plain < system.s else Degeneracy.NONDEG,
        wrt_s=Degeneracy.DEG_WRT_S if full < system.n else Degeneracy.NONDEG_WRT_S,
        rank=plain,
        augmented_rank=full,
        exact=aug.exact is not None,
    )


def _require_nondegenerate(system: PowerLawSystem, k: Vector, x: Vector,
                           W: Optional[RationalMatrix], tol: Optional[float]) -> AugmentedJacobian:
    classification = classify_degeneracy(system, k, x, W, tol)
    if classification.wrt_s is Degeneracy.DEG_WRT_S:
        raise SingularPointError(
            f"point is degenerate with respect to the stoichiometric compatibility class "
            f"(rank [J; W] = {classification.augmented_rank} < n = {system.n}); "
            f"sensitivities are only defined at non-degenerate points"
        )
    return augmented_jacobian(system, k, x, W)


# ---------------------------------------------------------------------------
# Sensitivities
# ---------------------------------------------------------------------------

def sensitivity_canonical(system: PowerLawSystem, k: Vector, x: Vector, j: int,
                          W: Optional[RationalMatrix] = None,
                          tol: Optional[float] = None) -> SensitivityVector:
    """
    Sensitivity for the canonical perturbation T -> T + u·e_j.

    Solves [∂g/∂x; W]·Sen = (0, e_j) directly and by the cofactor ratio
    Sen_i = (-1)^(i+s+j)·det(F without row s+j, column i) / det(F); the two
    must agree within the agreement tolerance. SOLVE values are returned.

    Raises:
        SingularPointError: If the point is degenerate with respect to S
    """
    if not 0 <= j < system.d:
        raise DimensionError(f"perturbation index {j} outside 0..{system.d - 1}")
    aug = _require_nondegenerate(system, k, x, W, tol)
    F = aug.matrix
    n, s = system.n, system.s
    rhs = np.zeros(n)
    rhs[s + j] = 1.0
    solved = scipy.linalg.solve(F, rhs)

    det = scipy.linalg.det(F)
    kept_rows = [row for row in range(n) if row != s + j]
    cramer = np.empty(n)
    for i in range(n):
        minor = F[np.ix_(kept_rows, [c for c in range(n) if c != i])]
        cofactor = scipy.linalg.det(minor) if minor.size else 1.0
        cramer[i] = (-1) ** (i + s + j) * cofactor / det

    agreement = get_tolerance_config()["agreement"]
    gap = float(np.max(np.abs(solved - cramer)))
    agree = bool(gap <= agreement * max(1.0, float(np.max(np.abs(solved)))))
    if not agree:
        logger.warning("Cramer and solve disagree by %.3e for perturbation %d", gap, j)
    return SensitivityVector(
        values=solved.tolist(),
        perturbation=[float(c == j) for c in range(system.d)],
        method=SensitivityMethod.SOLVE,
        cramer=cramer.tolist(),
        cramer_gap=gap,
        methods_agree=agree,
    )


def canonical_sensitivities(system: PowerLawSystem, k: Vector, x: Vector,
                            W: Optional[RationalMatrix] = None,
                            tol: Optional[float] = None) -> List[SensitivityVector]:
    """All d canonical sensitivities; empty when d = 0."""
    return [sensitivity_canonical(system, k, x, j, W, tol) for j in range(system.d)]


def sensitivity_general(canon: Sequence[SensitivityVector],
                        gamma_prime: Sequence[float]) -> SensitivityVector:
    """Sen_γ = Σ_i γ′(0)_i · Sen_γi."""
    if len(canon) != len(gamma_prime):
        raise DimensionError(f"{len(gamma_prime)} perturbation components for {len(canon)} "
                             f"canonical sensitivities")
    if not canon:
        return SensitivityVector([], [], SensitivityMethod.SOLVE)
    values = sum(c * np.asarray(vec.values) for c, vec in zip(gamma_prime, canon))
    return SensitivityVector(
        values=np.asarray(values, dtype=float).tolist(),
        perturbation=[float(c) for c in gamma_prime],
        method=SensitivityMethod.SOLVE,
    )


def state_perturbation_direction(W: Union[RationalMatrix, np.ndarray],
                                 direction: Sequence[float]) -> np.ndarray:
    """γ′(0) = W·dir, the total perturbation induced by moving x* along dir."""
    matrix = W.to_numpy() if isinstance(W, RationalMatrix) else np.asarray(W, dtype=float)
    direction = np.asarray(direction, dtype=float)
    if matrix.ndim != 2 or matrix.shape[1] != direction.shape[0]:
        raise DimensionError(f"cannot apply W of shape {matrix.shape} to {direction.shape}")
    return matrix @ direction


def sensitivity_vanishes(vectors: Sequence[SensitivityVector], i: int,
                         tol: Optional[float] = None) -> bool:
    """True iff component i is below tolerances.zero in every canonical sensitivity."""
    tol = get_tolerance_config()["zero"] if tol is None else tol
    return all(abs(vec.values[i]) < tol for vec in vectors)


def zero_sensitivity_test(system: PowerLawSystem, k: Vector, x: Vector, i: int,
                          W: Optional[RationalMatrix] = None,
                          tol: Optional[float] = None) -> bool:
    """
    True iff x_i has zero sensitivity at the point: rank(∂g/∂x without
    column i) < s.

    Raises:
        SingularPointError: If the point is degenerate with respect to S
    """
    if not 0 <= i < system.n:
        raise DimensionError(f"species index {i} outside 0..{system.n - 1}")
    aug = _require_nondegenerate(system, k, x, W, tol)
    others = [c for c in range(system.n) if c != i]
    if aug.exact is not None:
        return rank(aug.exact.submatrix(rows=range(system.s), cols=others)) < system.s
    J = aug.matrix[:system.s]
    scale = float(np.max(np.linalg.norm(J, axis=1), initial=0.0))
    return numeric_rank(J[:, others], tol, scale=scale) < system.s


# ---------------------------------------------------------------------------
# Steady states
# ---------------------------------------------------------------------------

def _newton(system: PowerLawSystem, k: Vector, x0: np.ndarray, W: np.ndarray, T: np.ndarray,
            tol: float, max_iter: int) -> np.ndarray:
    """Damped Newton on (g_k(x), Wx - T) keeping iterates positive."""
    kf = [float(v) for v in k]
    x = np.asarray(x0, dtype=float)
    for iteration in range(max_iter):
        F = np.concatenate([steady_state_residual(system, kf, x), W @ x - T])
        J = np.vstack([jacobian_at(system, kf, x), W])
        try:
            step = scipy.linalg.solve(J, -F)
        except (scipy.linalg.LinAlgError, ValueError) as e:
            raise OracleFailure(f"singular Newton system at iteration {iteration}: {e}")
        t = 1.0
        while np.any(x + t * step <= 0):
            t /= 2
            if t < 1e-12:
                raise OracleFailure("Newton step cannot keep the iterate positive")
        x = x + t * step
        if np.max(np.abs(t * step)) <= tol * max(1.0, np.max(np.abs(x))):
            logger.debug("Newton converged in %d iterations", iteration + 1)
            return x
    raise OracleFailure(f"Newton did not converge in {max_iter} iterations")


def find_steady_state(system: PowerLawSystem, k: Vector, seed_x: Vector,
                      T: Optional[Sequence[float]] = None,
                      W: Optional[RationalMatrix] = None) -> SteadyStatePoint:
    """
    Positive steady state on the fiber Wx = T (T = W·seed_x by default),
    found by damped Newton from seed_x.

    Raises:
        OracleFailure: If Newton does not converge within the iteration cap
    """
    tolerances = get_tolerance_config()
    W = _conservation(system, W)
    Wf = W.to_numpy().reshape(system.d, system.n)
    seed = np.asarray([float(v) for v in seed_x])
    _check_point(system, k, seed)
    T = Wf @ seed if T is None else np.asarray(T, dtype=float)
    x = _newton(system, k, seed, Wf, T, tolerances["newton_tol"], tolerances["newton_max_iter"])
    return SteadyStatePoint(tuple(k), tuple(float(v) for v in x),
                            float(np.max(np.abs(steady_state_residual(system, k, x)), initial=0.0)))


def continuation_oracle(system: PowerLawSystem, k: Vector, x: Vector, j: int, h: float,
                        W: Optional[RationalMatrix] = None) -> np.ndarray:
    """
    Central difference (c(h) - c(-h)) / 2h of the steady-state curve on the
    fibers T* ± h·e_j, each point Newton-corrected from x*.

    Raises:
        OracleFailure: If either correction fails to converge
    """
    tolerances = get_tolerance_config()
    W = _conservation(system, W)
    if not 0 <= j < system.d:
        raise DimensionError(f"perturbation index {j} outside 0..{system.d - 1}")
    _require_nondegenerate(system, k, x, W, None)
    Wf = W.to_numpy().reshape(system.d, system.n)
    x0 = np.asarray([float(v) for v in x])
    T = Wf @ x0
    offset = np.zeros(system.d)
    offset[j] = h
    forward = _newton(system, k, x0, Wf, T + offset,
                      tolerances["newton_tol"], tolerances["newton_max_iter"])
    backward = _newton(system, k, x0, Wf, T - offset,
                       tolerances["newton_tol"], tolerances["newton_max_iter"])
    return (forward - backward) / (2 * h)


def admit_point(system: PowerLawSystem, k: Vector, x: Vector,
                tol: Optional[float] = None) -> SteadyStatePoint:
    """
    Accept (k, x) as a steady state when max|g_k(x)| <= tol·max(1, flux scale).

    Raises:
        DomainError: If the residual is too large or an entry is non-positive
    """
    tol = get_tolerance_config()["residual"] if tol is None else tol
    residual = float(np.max(np.abs(steady_state_residual(system, k, x)), initial=0.0))
    rates = _exact_rates(system, k, x)
    fluxes = np.asarray([float(v) for v in rates]) if rates is not None else _float_rates(system, k, x)
    scale = float(np.max(np.abs(system.N.to_numpy()) @ fluxes, initial=0.0))
    if residual > tol * max(1.0, scale):
        raise DomainError(f"not a steady state: residual {residual:.3e} exceeds "
                          f"{tol:.1e} x {max(1.0, scale):.3e}")
    return SteadyStatePoint(tuple(k), tuple(x), residual)


def sample_steady_states(system: PowerLawSystem, count: int,
                         rng: Optional[np.random.Generator] = None,
                         seed: int = 0) -> List[SteadyStatePoint]:
    """
    Exact positive steady states from the flux cone.

    Picks v = Σ λ_i E_i with positive integer λ and a positive rational x,
    then sets k_j = v_j / x^B_j so that g_k(x) = N·v = 0.

    Raises:
        BuildError: If ker(N) has no strictly positive vector
    """
    rays = extreme_rays(system.N)
    if not rays.has_positive_point:
        raise BuildError("no positive steady states: ker(N) misses the positive orthant")
    rng = np.random.default_rng(seed) if rng is None else rng
    B = _numeric_B(system)
    points = []
    for _ in range(count):
        lam = [int(v) for v in rng.integers(1, 10, size=len(rays.rays))]
        v = [sum(l * ray[j] for l, ray in zip(lam, rays.rays)) for j in range(system.r)]
        x = tuple(Fraction(int(a), int(b)) for a, b in rng.integers(1, 10, size=(system.n, 2)))
        if B.is_integer():
            monomials = []
            for j in range(system.r):
                value = Fraction(1)
                for l in range(system.n):
                    if B[l, j]:
                        value *= x[l] ** int(B[l, j])
                monomials.append(value)
            k: Tuple[Scalar, ...] = tuple(Fraction(vj) / m for vj, m in zip(v, monomials))
        else:
            xf = np.asarray([float(c) for c in x])
            monomials_f = np.prod(xf[:, None] ** B.to_numpy(), axis=0)
            k = tuple(float(vj) / m for vj, m in zip(v, monomials_f))
            x = tuple(float(c) for c in x)
        points.append(SteadyStatePoint(
            k, x, float(np.max(np.abs(steady_state_residual(system, k, x)), initial=0.0))
        ))
    return points


# ---------------------------------------------------------------------------
# Per-point report
# ---------------------------------------------------------------------------

@dataclass_json
@dataclass
class PointReport:
    """Sensitivity results at one steady state"""
    k: List[str]
    x: List[str]
    admitted: bool
    residual: Optional[float] = None
    degeneracy: Optional[DegeneracyClassification] = None
    sensitivities: List[SensitivityVector] = field(default_factory=list)
    zero_sensitivity: Dict[str, bool] = field(default_factory=dict)
    error: Optional[str] = None
    notes: List[str] = field(default_factory=list)


def analyze_point(system: PowerLawSystem, k: Vector, x: Vector,
                  species: Optional[Sequence[str]] = None,
                  W: Optional[RationalMatrix] = None) -> PointReport:
    """Admit a point, classify it and compute every canonical sensitivity."""
    report = PointReport(k=[str(v) for v in k], x=[str(v) for v in x], admitted=False)
    try:
        point = admit_point(system, k, x)
    except AcrError as e:
        report.error = str(e)
        return report
    report.admitted = True
    report.residual = point.residual
    if system.d == 0:
        report.notes.append("s = n: sensitivities are vacuously zero (finite fibers)")
    W = _conservation(system, W)
    report.degeneracy = classify_degeneracy(system, k, x, W)
    if report.degeneracy.wrt_s is Degeneracy.DEG_WRT_S:
        report.error = "degenerate with respect to S: sensitivities undefined"
        return report
    report.sensitivities = canonical_sensitivities(system, k, x, W)
    for j, vec in enumerate(report.sensitivities):
        if not vec.methods_agree:
            report.notes.append(f"Cramer and solve disagree by {vec.cramer_gap:.3e} "
                                f"for perturbation {j + 1}")
    names = list(species) if species else list(system.species)
    for name in names:
        i = system.species_index(name)
        report.zero_sensitivity[name] = zero_sensitivity_test(system, k, x, i, W)
        if report.zero_sensitivity[name] != sensitivity_vanishes(report.sensitivities, i):
            report.notes.append(f"{name}: rank test and sensitivity magnitudes disagree")
    return report
