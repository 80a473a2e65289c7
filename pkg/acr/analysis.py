"""
Family-level analysis of power-law systems.

Everything here works on the convex-parameter Jacobian N·diag(v)·Bᵗ with v
ranging over ker(N): local ACR is read off its minors, non-degeneracy is
certified (or refuted) over the flux cone, and the divisibility test gives a
necessary condition through the stacked matrix [N·diag(v)·Bᵗ·diag(h); W].
No steady state is ever solved for.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from dataclasses_json import dataclass_json

from .cone import ConeRays, extreme_rays
from .config import get_analysis_config
from .errors import BuildError, DimensionError
from .exact import (
    Minor,
    MultiPoly,
    PolyMatrix,
    RationalMatrix,
    constant,
    divisible_by,
    format_fraction,
    format_poly,
    generator,
    is_same_sign,
    kernel_basis,
    lift_poly,
    minors,
    normalized,
    poly_det,
    poly_ring,
    rank,
    to_fraction,
    variable_names,
)
from .network import PowerLawSystem, SymbolicMatrix

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class LocalAcr(Enum):
    """Local ACR verdict for one species"""
    YES = "YES"
    NO = "NO"
    CONDITIONAL = "CONDITIONAL"
    NOT_EVALUATED = "NOT_EVALUATED"


class NondegeneracyStatus(Enum):
    CERTIFIED = "CERTIFIED"
    FAILS = "FAILS"
    INCONCLUSIVE = "INCONCLUSIVE"
    EMPTY_CONE = "EMPTY_CONE"


class DivisibilityStatus(Enum):
    """Outcome of the h_i | p_v(h) test"""
    DIVISIBLE = "DIVISIBLE"
    NOT_DIVISIBLE = "NOT_DIVISIBLE"
    NOT_INFORMATIVE = "NOT_INFORMATIVE"
    SKIPPED = "SKIPPED"
    UNAVAILABLE = "UNAVAILABLE"


# ---------------------------------------------------------------------------
# Convex-parameter Jacobian
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvexJacobian:
    """
    N·diag(v)·Bᵗ with v = Σ_j a_j·w_j over a basis (or generating set) {w_j}.

    Attributes:
        matrix: s x n polynomial matrix over the parameters and any b-symbols
        kernel_basis: The vectors w_j
        param_names: One parameter per vector
        b_names: Exponent symbols of a symbolic B (empty for numeric B)
    """
    matrix: PolyMatrix
    kernel_basis: Tuple[Tuple[Fraction, ...], ...]
    param_names: Tuple[str, ...]
    b_names: Tuple[str, ...] = ()

    @property
    def s(self) -> int:
        return self.matrix.nrows

    @property
    def n(self) -> int:
        return self.matrix.ncols

    @property
    def is_symbolic(self) -> bool:
        return bool(self.b_names)


def _check_names(names: Sequence[str]) -> None:
    seen = set()
    for name in names:
        if name in seen:
            raise BuildError(f"variable name '{name}' is used twice (rename the exponent symbol)")
        seen.add(name)


def _exponent_entries(system: PowerLawSystem, ring) -> List[List[MultiPoly]]:
    B = system.B
    if isinstance(B, SymbolicMatrix):
        return [[generator(ring, e) if isinstance(e, str) else constant(ring, e) for e in row]
                for row in B.data]
    return [[constant(ring, e) for e in row] for row in B.data]


def _parametrized_flux(ring, names: Sequence[str],
                       vectors: Sequence[Sequence[Fraction]], r: int) -> List[MultiPoly]:
    v = [ring.zero] * r
    for name, w in zip(names, vectors):
        a = generator(ring, name)
        for j, wj in enumerate(w):
            if wj:
                v[j] = v[j] + constant(ring, wj) * a
    return v


def _convex_matrix(ring, N: RationalMatrix, B: List[List[MultiPoly]],
                   v: Sequence[MultiPoly]) -> PolyMatrix:
    """Entry (i, l) = Σ_j N[i, j]·v_j·B[l, j]."""
    rows = []
    for i in range(N.nrows):
        row = []
        for l in range(len(B)):
            entry = ring.zero
            for j in range(N.ncols):
                if N[i, j] and v[j] and B[l][j]:
                    entry = entry + constant(ring, N[i, j]) * v[j] * B[l][j]
            row.append(entry)
        rows.append(row)
    return PolyMatrix.from_rows(ring, rows, len(B))


def _jacobian_over(system: PowerLawSystem, vectors: Sequence[Sequence[Fraction]],
                   names: Sequence[str]) -> ConvexJacobian:
    b_names = tuple(system.b_symbols)
    _check_names(list(names) + list(b_names))
    ring = poly_ring(list(names) + list(b_names))
    vectors = tuple(tuple(to_fraction(x) for x in w) for w in vectors)
    v = _parametrized_flux(ring, names, vectors, system.r)
    matrix = _convex_matrix(ring, system.N, _exponent_entries(system, ring), v)
    return ConvexJacobian(matrix, vectors, tuple(names), b_names)


def convex_jacobian(system: PowerLawSystem,
                    basis: Optional[Sequence[Sequence[object]]] = None,
                    param_names: Optional[Sequence[str]] = None) -> ConvexJacobian:
    """
    Build N·diag(v(a))·Bᵗ over a basis of ker(N).

    Args:
        system: The power-law system
        basis: Basis of ker(N); the canonical kernel basis when omitted
        param_names: Parameter names, a1..aK by default

    Raises:
        BuildError: If a supplied vector is not in ker(N) or the vectors do
            not form a basis
    """
    if basis is None:
        vectors = [tuple(Fraction(x) for x in w) for w in kernel_basis(system.N)]
    else:
        vectors = [tuple(to_fraction(x) for x in w) for w in basis]
        for w in vectors:
            if len(w) != system.r:
                raise DimensionError(f"basis vector of length {len(w)}, expected {system.r}")
            if any(system.N.apply(w)):
                raise BuildError(f"vector {[format_fraction(x) for x in w]} is not in ker(N)")
        dim = system.r - system.s
        if len(vectors) != dim or (dim and rank(RationalMatrix.from_rows(vectors)) != dim):
            raise BuildError(f"need {dim} independent kernel vectors, got {len(vectors)}")

    if param_names is None:
        param_names = [f"a{j + 1}" for j in range(len(vectors))]
    elif len(param_names) != len(vectors):
        raise DimensionError(f"{len(param_names)} parameter names for {len(vectors)} vectors")
    return _jacobian_over(system, vectors, param_names)


def ray_jacobian(system: PowerLawSystem, rays: ConeRays, prefix: str = "lam") -> ConvexJacobian:
    """N·diag(Σ λ_i E_i)·Bᵗ over the extreme rays E_i of the flux cone."""
    names = [f"{prefix}{i + 1}" for i in range(len(rays.rays))]
    return _jacobian_over(system, rays.rays, names)


def free_jacobian(system: PowerLawSystem) -> ConvexJacobian:
    """N·diag(v)·Bᵗ with every flux coordinate a free variable v1..vr."""
    unit = [tuple(int(i == j) for i in range(system.r)) for j in range(system.r)]
    return _jacobian_over(system, unit, [f"v{j + 1}" for j in range(system.r)])


def flux_jacobian(system: PowerLawSystem, v: Sequence[object]) -> RationalMatrix:
    """Exact N·diag(v)·Bᵗ for a concrete flux vector and numeric B."""
    B = system.numeric_B
    v = [to_fraction(x) for x in v]
    if len(v) != system.r:
        raise DimensionError(f"flux vector of length {len(v)}, expected {system.r}")
    scaled = RationalMatrix.from_rows(
        [[system.N[i, j] * v[j] for j in range(system.r)] for i in range(system.s)],
        ncols=system.r,
    )
    return scaled @ B.transpose()


# ---------------------------------------------------------------------------
# Local ACR
# ---------------------------------------------------------------------------

@dataclass_json
@dataclass
class AcrVerdict:
    """Local ACR verdict for one species with its evidence"""
    species: str
    index: int
    local_acr: LocalAcr
    evidence: str
    witness_cols: Optional[List[int]] = None
    witness_minor: Optional[str] = None
    conditions: List[str] = field(default_factory=list)


def excluded_minors(cj: ConvexJacobian, i: int) -> List[Minor]:
    """All s x s minors of the convex Jacobian avoiding column i."""
    if not 0 <= i < cj.n:
        raise DimensionError(f"species index {i} outside 0..{cj.n - 1}")
    if cj.s > cj.n - 1:
        return []
    return minors(cj.matrix, cj.s, excluded_cols=(i,))


def _split_parameters(cj: ConvexJacobian, p: MultiPoly) -> List[MultiPoly]:
    """Coefficients of p in the parameters, as polynomials in the b-symbols."""
    names = variable_names(p.ring)
    b_positions = [names.index(b) for b in cj.b_names]
    a_positions = [k for k in range(len(names)) if k not in b_positions]
    b_ring = poly_ring(cj.b_names)
    groups: Dict[Tuple[int, ...], Dict[Tuple[int, ...], object]] = defaultdict(dict)
    for monom, coeff in p.iterterms():
        akey = tuple(monom[k] for k in a_positions)
        bkey = tuple(monom[k] for k in b_positions)
        groups[akey][bkey] = groups[akey].get(bkey, 0) + coeff
    return [b_ring.from_dict(terms) for _, terms in sorted(groups.items())]


def _strip_monomial(p: MultiPoly) -> MultiPoly:
    # b-symbols are positive, so a monomial factor never vanishes
    if not p or not p.ring.ngens:
        return p
    monoms = list(p.itermonoms())
    common = tuple(min(m[k] for m in monoms) for k in range(p.ring.ngens))
    return p.ring.from_dict({
        tuple(e - g for e, g in zip(monom, common)): coeff for monom, coeff in p.iterterms()
    })


def symbolic_acr_condition(cj: ConvexJacobian, i: int) -> List[MultiPoly]:
    """
    Conditions on the exponent symbols for local ACR in species i.

    Every excluded-column minor must vanish identically in the parameters, so
    each of its coefficients (a polynomial in the b-symbols) must vanish.
    Monomial factors are removed and the results normalized, deduplicated
    and sorted by their printed form. With a numeric B the conditions are
    nonzero constants, present exactly when the verdict is NO.
    """
    if not cj.is_symbolic:
        nonzero = any(minor.value for minor in excluded_minors(cj, i))
        return [cj.matrix.ring.one] if nonzero else []
    conditions = {}
    for minor in excluded_minors(cj, i):
        if not minor.value:
            continue
        for coeff in _split_parameters(cj, minor.value):
            q = normalized(_strip_monomial(coeff))
            if q:
                conditions[format_poly(q)] = q
    return [conditions[key] for key in sorted(conditions)]


def local_acr_test(cj: ConvexJacobian, i: int, species: Optional[str] = None) -> AcrVerdict:
    """
    Decide local ACR in species i from the minors of the convex Jacobian.

    YES iff every s x s minor avoiding column i is the zero polynomial. For a
    symbolic B the verdict is CONDITIONAL unless the coefficient conditions
    are empty (YES) or contain a nonzero constant (NO).
    """
    species = species if species is not None else f"x{i + 1}"
    all_minors = excluded_minors(cj, i)
    nonzero = next((m for m in all_minors if m.value), None)

    if nonzero is None:
        evidence = (f"no {cj.s}x{cj.s} minor avoids column {i}" if not all_minors
                    else f"all {len(all_minors)} minors avoiding column {i} vanish identically")
        return AcrVerdict(species, i, LocalAcr.YES, evidence)

    witness = dict(witness_cols=list(nonzero.cols), witness_minor=format_poly(nonzero.value))
    if not cj.is_symbolic:
        return AcrVerdict(species, i, LocalAcr.NO,
                          f"minor on columns {list(nonzero.cols)} is nonzero", **witness)

    conditions = symbolic_acr_condition(cj, i)
    strings = [format_poly(c) for c in conditions]
    if not conditions:
        return AcrVerdict(species, i, LocalAcr.YES,
                          "every minor vanishes for all positive exponent symbols")
    if any(c.is_ground for c in conditions):
        return AcrVerdict(species, i, LocalAcr.NO,
                          "a minor is nonzero for every value of the exponent symbols",
                          conditions=strings, **witness)
    return AcrVerdict(species, i, LocalAcr.CONDITIONAL,
                      "local ACR iff all listed conditions vanish",
                      conditions=strings, **witness)


# ---------------------------------------------------------------------------
# Non-degeneracy
# ---------------------------------------------------------------------------

@dataclass_json
@dataclass
class NondegeneracyVerdict:
    """
    Non-degeneracy over the flux cone.

    stage records which step decided: "cone", "free" (same-sign minor in
    free v), "rays" (same-sign minor in ray coordinates), "sample" (all
    minors vanish at witness_vector) or "none".
    """
    status: NondegeneracyStatus
    stage: str
    message: str
    witness_cols: Optional[List[int]] = None
    witness_minor: Optional[str] = None
    witness_vector: Optional[List[str]] = None
    witness_lambda: Optional[List[int]] = None
    samples_tried: int = 0
    seed: int = 0


def _same_sign_minor(cj: ConvexJacobian) -> Optional[Minor]:
    if cj.s > cj.n:
        return None
    for minor in minors(cj.matrix, cj.s):
        if is_same_sign(minor.value):
            return minor
    return None


def _lambda_samples(count: int, size: int, seed: int, sample_max: int):
    yield [1] * size
    rng = np.random.default_rng(seed)
    for _ in range(max(count - 1, 0)):
        yield [int(x) for x in rng.integers(1, sample_max + 1, size=size)]


def nondegeneracy_test(system: PowerLawSystem, cj: ConvexJacobian, rays: ConeRays,
                       samples: Optional[int] = None, seed: Optional[int] = None,
                       sample_max: Optional[int] = None) -> NondegeneracyVerdict:
    """
    Certify or refute that every positive flux in ker(N) gives full rank s.

    Stages: empty cone check, same-sign minor in free v (b-symbols count as
    positive), same-sign minor in ray coordinates, then exact evaluation at
    λ = (1,...,1) and seeded random integer λ in [1, sample_max]. A sample
    where the rank drops below s is a FAILS witness; otherwise INCONCLUSIVE.
    """
    settings = get_analysis_config()
    samples = settings["samples"] if samples is None else samples
    seed = settings["seed"] if seed is None else seed
    sample_max = settings["sample_max"] if sample_max is None else sample_max
    s = cj.s

    if not rays.has_positive_point:
        logger.debug("flux cone has no strictly positive point")
        return NondegeneracyVerdict(NondegeneracyStatus.EMPTY_CONE, "cone",
                                    "ker(N) misses the positive orthant: no positive steady "
                                    "states exist for any k", seed=seed)

    witness = _same_sign_minor(free_jacobian(system))
    if witness is not None:
        logger.debug("non-degeneracy certified by free minor on %s", witness.cols)
        return NondegeneracyVerdict(NondegeneracyStatus.CERTIFIED, "free",
                                    "minor in free flux coordinates has coefficients of one sign",
                                    witness_cols=list(witness.cols),
                                    witness_minor=format_poly(witness.value), seed=seed)

    if system.is_symbolic:
        return NondegeneracyVerdict(NondegeneracyStatus.INCONCLUSIVE, "none",
                                    "no same-sign minor; ray and sampling stages need a numeric B",
                                    seed=seed)

    on_rays = ray_jacobian(system, rays)
    witness = _same_sign_minor(on_rays)
    if witness is not None:
        logger.debug("non-degeneracy certified by ray minor on %s", witness.cols)
        return NondegeneracyVerdict(NondegeneracyStatus.CERTIFIED, "rays",
                                    "minor in extreme-ray coordinates has coefficients of one sign",
                                    witness_cols=list(witness.cols),
                                    witness_minor=format_poly(witness.value), seed=seed)

    tried = 0
    for lam in _lambda_samples(samples, len(rays.rays), seed, sample_max):
        tried += 1
        point = dict(zip(on_rays.param_names, lam))
        if rank(on_rays.matrix.evaluate(point)) < s:
            v = [sum(l * ray[j] for l, ray in zip(lam, rays.rays)) for j in range(system.r)]
            logger.debug("degenerate flux found after %d samples", tried)
            return NondegeneracyVerdict(NondegeneracyStatus.FAILS, "sample",
                                        f"every {s}x{s} minor vanishes at a positive flux",
                                        witness_vector=[str(x) for x in v],
                                        witness_lambda=list(lam), samples_tried=tried, seed=seed)

    return NondegeneracyVerdict(NondegeneracyStatus.INCONCLUSIVE, "none",
                                f"no certificate and no degenerate flux in {tried} samples",
                                samples_tried=tried, seed=seed)


# ---------------------------------------------------------------------------
# Divisibility
# ---------------------------------------------------------------------------

def divisibility_polynomial(system: PowerLawSystem, cj: ConvexJacobian) -> MultiPoly:
    """
    p_v(h) = det [N·diag(v(a))·Bᵗ·diag(h); W] in the parameters and h1..hn.

    Raises:
        BuildError: If the system has no conservation matrix or d = 0
    """
    if system.d == 0:
        raise BuildError("divisibility needs d >= 1")
    if system.W is None:
        raise BuildError("divisibility needs a conservation matrix W")
    h_names = [f"h{i + 1}" for i in range(system.n)]
    names = variable_names(cj.matrix.ring) + h_names
    _check_names(names)
    ring = poly_ring(names)
    h = [generator(ring, name) for name in h_names]
    top = PolyMatrix.from_rows(
        ring, [[lift_poly(e, ring) for e in row] for row in cj.matrix.data], cj.n,
    ).scale_columns(h)
    return poly_det(top.vstack(PolyMatrix.from_rational(ring, system.W)))


def divisibility_status(p: MultiPoly, i: int) -> DivisibilityStatus:
    if not p:
        return DivisibilityStatus.NOT_INFORMATIVE
    if divisible_by(p, f"h{i + 1}"):
        return DivisibilityStatus.DIVISIBLE
    return DivisibilityStatus.NOT_DIVISIBLE


def divisibility_test(system: PowerLawSystem, cj: ConvexJacobian, i: int) -> bool:
    """
    True iff h_i divides p_v(h).

    Necessary for local ACR only: a divisible polynomial does not imply
    local ACR. The zero polynomial counts as divisible.
    """
    if not 0 <= i < system.n:
        raise DimensionError(f"species index {i} outside 0..{system.n - 1}")
    return divisible_by(divisibility_polynomial(system, cj), f"h{i + 1}")


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------

@dataclass_json
@dataclass
class SpeciesReport:
    """Per-species line of an analysis report"""
    species: str
    index: int
    local_acr: LocalAcr
    evidence: str
    divisibility: DivisibilityStatus
    zero_sensitivity: bool
    witness_cols: Optional[List[int]] = None
    witness_minor: Optional[str] = None
    conditions: List[str] = field(default_factory=list)


@dataclass_json
@dataclass
class AnalysisReport:
    """Complete family-level analysis of one system"""
    name: str
    species_names: List[str]
    n: int
    r: int
    s: int
    d: int
    symbolic: bool
    kernel_basis: List[List[str]]
    param_names: List[str]
    rays: List[List[int]]
    convex_jacobian: List[List[str]]
    nondegeneracy: NondegeneracyStatus
    nondegeneracy_evidence: NondegeneracyVerdict
    species: List[SpeciesReport]
    divisibility_polynomial: Optional[str] = None
    seed: int = 0
    samples: int = 0
    notes: List[str] = field(default_factory=list)
    source: Optional[str] = None
    schema: int = SCHEMA_VERSION

    def local_acr_species(self) -> List[str]:
        return [sp.species for sp in self.species if sp.local_acr is LocalAcr.YES]

    def verdict(self, species: str) -> SpeciesReport:
        for sp in self.species:
            if sp.species == species:
                return sp
        raise KeyError(species)

    def dumps(self) -> str:
        """Canonical JSON: sorted keys, two-space indent."""
        return self.to_json(indent=2, sort_keys=True)

    def pretty_print(self, color: bool = False) -> str:
        """Human-readable rendering."""
        def paint(text: str, code: str) -> str:
            return f"\033[{code}m{text}\033[0m" if color else text

        marks = {
            LocalAcr.YES: paint("YES", "32"),
            LocalAcr.NO: paint("NO", "31"),
            LocalAcr.CONDITIONAL: paint("CONDITIONAL", "33"),
            LocalAcr.NOT_EVALUATED: paint("NOT_EVALUATED", "2"),
        }
        lines = [
            f"📊 {self.name or 'system'}: n={self.n} r={self.r} s={self.s} d={self.d}",
            f"   kernel basis: {['(' + ', '.join(w) + ')' for w in self.kernel_basis]}",
            f"   extreme rays: {[tuple(ray) for ray in self.rays]}",
            f"   non-degeneracy: {self.nondegeneracy.value} ({self.nondegeneracy_evidence.message})",
        ]
        evidence = self.nondegeneracy_evidence
        if evidence.witness_minor is not None:
            lines.append(f"      minor on columns {evidence.witness_cols}: {evidence.witness_minor}")
        if evidence.witness_vector is not None:
            lines.append(f"      degenerate flux v = ({', '.join(evidence.witness_vector)})")
        lines.append("   species:")
        width = max((len(sp.species) for sp in self.species), default=1)
        for sp in self.species:
            line = (f"     {sp.species.ljust(width)}  local ACR {marks[sp.local_acr]}"
                    f"  divisibility {sp.divisibility.value}")
            if sp.witness_minor is not None and sp.local_acr is LocalAcr.NO:
                line += f"  [minor {sp.witness_cols}: {sp.witness_minor}]"
            lines.append(line)
            for condition in sp.conditions:
                lines.append(f"        {condition} = 0")
        for note in self.notes:
            lines.append(f"   💡 {note}")
        return "\n".join(lines)


def _kernel_strings(cj: ConvexJacobian) -> List[List[str]]:
    return [[format_fraction(x) for x in w] for w in cj.kernel_basis]


def analyze(system: PowerLawSystem, samples: Optional[int] = None, seed: Optional[int] = None,
            sample_max: Optional[int] = None) -> AnalysisReport:
    """
    Run the full family-level analysis.

    Non-degeneracy is tested once; local ACR and divisibility per species.
    The zero-sensitivity flag follows local ACR: a YES verdict implies zero
    sensitivity at every steady state that is non-degenerate with respect to
    the stoichiometric compatibility classes.
    """
    settings = get_analysis_config()
    samples = settings["samples"] if samples is None else samples
    seed = settings["seed"] if seed is None else seed
    sample_max = settings["sample_max"] if sample_max is None else sample_max

    cj = convex_jacobian(system)
    rays = extreme_rays(system.N)
    logger.debug("%s: %d kernel vectors, %d extreme rays",
                 system.name or "system", len(cj.kernel_basis), len(rays.rays))
    nd = nondegeneracy_test(system, cj, rays, samples=samples, seed=seed, sample_max=sample_max)
    notes: List[str] = []
    poly_string = None

    if nd.status is NondegeneracyStatus.EMPTY_CONE:
        species = [
            SpeciesReport(name, i, LocalAcr.NOT_EVALUATED, "no positive steady states",
                          DivisibilityStatus.SKIPPED, False)
            for i, name in enumerate(system.species)
        ]
        notes.append("ker(N) contains no strictly positive vector, so g_k has no positive "
                     "zeros for any k; nothing else was evaluated")
    else:
        verdicts = [local_acr_test(cj, i, name) for i, name in enumerate(system.species)]
        if system.d == 0:
            statuses = [DivisibilityStatus.SKIPPED] * system.n
            notes.append("s = n: every positive solution set is finite, so each species "
                         "trivially has local ACR and all sensitivities are vacuously zero")
        elif system.W is None:
            statuses = [DivisibilityStatus.UNAVAILABLE] * system.n
            notes.append("no conservation matrix W given: divisibility test unavailable")
        else:
            p = divisibility_polynomial(system, cj)
            poly_string = format_poly(p)
            statuses = [divisibility_status(p, i) for i in range(system.n)]
        species = [
            SpeciesReport(v.species, v.index, v.local_acr, v.evidence, status,
                          v.local_acr is LocalAcr.YES, v.witness_cols, v.witness_minor,
                          v.conditions)
            for v, status in zip(verdicts, statuses)
        ]
        if nd.status is NondegeneracyStatus.CERTIFIED:
            notes.append("non-degeneracy certified: YES verdicts hold over every positive "
                         "steady state, for every k admitting one")
        else:
            notes.append("non-degeneracy not certified: YES verdicts hold over the "
                         "non-degenerate positive steady states only")
        if any(sp.local_acr is LocalAcr.YES for sp in species):
            notes.append("local ACR coincides with ACR if the positive solution set is connected "
                         "(connectivity is not checked)")
        if system.is_symbolic:
            notes.append("exponent symbols are treated as positive parameters")

    return AnalysisReport(
        name=system.name,
        species_names=list(system.species),
        n=system.n,
        r=system.r,
        s=system.s,
        d=system.d,
        symbolic=system.is_symbolic,
        kernel_basis=_kernel_strings(cj),
        param_names=list(cj.param_names),
        rays=[list(ray) for ray in rays.rays],
        convex_jacobian=cj.matrix.to_strings(),
        nondegeneracy=nd.status,
        nondegeneracy_evidence=nd,
        species=species,
        divisibility_polynomial=poly_string,
        seed=seed,
        samples=samples,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# Re-verification
# ---------------------------------------------------------------------------

def verify_acr_verdict(cj: ConvexJacobian, verdict: AcrVerdict) -> bool:
    """Recompute the evidence of a local ACR verdict and compare."""
    if verdict.local_acr is LocalAcr.YES and not cj.is_symbolic:
        return all(not m.value for m in excluded_minors(cj, verdict.index))
    if verdict.local_acr is LocalAcr.YES:
        return not symbolic_acr_condition(cj, verdict.index)
    if verdict.witness_cols is None or verdict.index in verdict.witness_cols:
        return False
    value = poly_det(cj.matrix.submatrix(cols=verdict.witness_cols))
    if not value or format_poly(value) != verdict.witness_minor:
        return False
    if cj.is_symbolic:
        conditions = [format_poly(c) for c in symbolic_acr_condition(cj, verdict.index)]
        return conditions == verdict.conditions
    return True


def verify_nondegeneracy_witness(system: PowerLawSystem, verdict: NondegeneracyVerdict,
                                 rays: Optional[ConeRays] = None) -> bool:
    """
    Recompute a non-degeneracy witness.

    A CERTIFIED minor must reproduce and have coefficients of one sign; a
    FAILS vector must be a strictly positive kernel vector at which the exact
    rank drops below s. Verdicts without a witness check the cone only.
    """
    rays = extreme_rays(system.N) if rays is None else rays
    if verdict.status is NondegeneracyStatus.EMPTY_CONE:
        return not rays.has_positive_point
    if verdict.status is NondegeneracyStatus.CERTIFIED:
        cj = free_jacobian(system) if verdict.stage == "free" else ray_jacobian(system, rays)
        value = poly_det(cj.matrix.submatrix(cols=verdict.witness_cols))
        return is_same_sign(value) and format_poly(value) == verdict.witness_minor
    if verdict.status is NondegeneracyStatus.FAILS:
        v = [Fraction(x) for x in verdict.witness_vector]
        if any(x <= 0 for x in v) or any(system.N.apply(v)):
            return False
        return rank(flux_jacobian(system, v)) < system.s
    return rays.has_positive_point
