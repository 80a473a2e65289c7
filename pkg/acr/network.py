"""
Reaction networks and their power-law steady-state systems.

A Network is the combinatorial object (species, reactions). build_system turns
it into a PowerLawSystem g_k(x) = N diag(k) x^B by forming the stoichiometric
matrix, choosing the exponent matrix and dropping linearly dependent rows.
Systems given directly as matrices go through system_from_matrices instead.

The second half of the module handles generalized polynomials (rational
exponents) and the monomial change of variables that clears denominators.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import BuildError, DimensionError, DomainError
from .exact import (
    MultiPoly,
    RationalMatrix,
    from_terms,
    left_kernel_basis,
    poly_ring,
    rank,
    select_independent_rows,
    to_fraction,
)

logger = logging.getLogger(__name__)

ExponentEntry = Union[Fraction, str]


@dataclass(frozen=True)
class Reaction:
    """A single reaction sum(alpha_i X_i) -> sum(beta_i X_i)"""
    reactant_coeffs: Tuple[int, ...]
    product_coeffs: Tuple[int, ...]
    rate_symbol: str

    def __post_init__(self):
        if len(self.reactant_coeffs) != len(self.product_coeffs):
            raise DimensionError("reactant and product vectors differ in length")
        if any(c < 0 for c in self.reactant_coeffs + self.product_coeffs):
            raise BuildError(f"negative stoichiometric coefficient in reaction {self.rate_symbol}")
        if self.reactant_coeffs == self.product_coeffs:
            raise BuildError(f"reaction {self.rate_symbol} has identical reactant and product")


@dataclass(frozen=True)
class Network:
    """Species in declaration order and the reactions between them"""
    species: Tuple[str, ...]
    reactions: Tuple[Reaction, ...]

    def __post_init__(self):
        if len(set(self.species)) != len(self.species):
            raise BuildError(f"duplicate species names in {list(self.species)}")
        if not self.reactions:
            raise BuildError("a network needs at least one reaction")
        for reaction in self.reactions:
            if len(reaction.reactant_coeffs) != len(self.species):
                raise BuildError(
                    f"reaction {reaction.rate_symbol} references {len(reaction.reactant_coeffs)} "
                    f"species, network declares {len(self.species)}"
                )
        names = [reaction.rate_symbol for reaction in self.reactions]
        if len(set(names)) != len(names):
            raise BuildError(f"duplicate rate names in {names}")

    @property
    def n(self) -> int:
        return len(self.species)

    @property
    def r(self) -> int:
        return len(self.reactions)

    def stoichiometric_matrix(self) -> RationalMatrix:
        """Gamma with gamma_ij = beta_ij - alpha_ij."""
        return RationalMatrix.from_rows(
            [[rx.product_coeffs[i] - rx.reactant_coeffs[i] for rx in self.reactions]
             for i in range(self.n)],
            ncols=self.r,
        )

    def reactant_matrix(self) -> RationalMatrix:
        return RationalMatrix.from_rows(
            [[rx.reactant_coeffs[i] for rx in self.reactions] for i in range(self.n)],
            ncols=self.r,
        )


class Kinetics(Enum):
    MASS_ACTION = "mass-action"


@dataclass(frozen=True)
class SymbolicMatrix:
    """
    Exponent matrix whose entries are rationals or opaque positive symbols.

    Symbols are ordered by first appearance in row-major order.
    """
    data: Tuple[Tuple[ExponentEntry, ...], ...]
    ncols: int

    @property
    def nrows(self) -> int:
        return len(self.data)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def symbols(self) -> List[str]:
        seen: List[str] = []
        for row in self.data:
            for entry in row:
                if isinstance(entry, str) and entry not in seen:
                    seen.append(entry)
        return seen

    def is_numeric(self) -> bool:
        return not self.symbols()

    def to_rational(self) -> RationalMatrix:
        if not self.is_numeric():
            raise BuildError(f"exponent matrix has symbolic entries {self.symbols()}")
        return RationalMatrix(tuple(tuple(e for e in row) for row in self.data), self.ncols)

    def to_strings(self) -> List[List[str]]:
        return [[str(e) for e in row] for row in self.data]

    def __str__(self) -> str:
        cells = self.to_strings()
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("[" + "  ".join(c.rjust(width) for c in row) + "]" for row in cells)


ExponentMatrix = Union[RationalMatrix, SymbolicMatrix]


@dataclass(frozen=True)
class PowerLawSystem:
    """
    g_k(x) = N diag(k) x^B together with its conservation matrix W.

    gamma is None for systems given directly by matrices. W is None only when
    d >= 1 and no conservation matrix was supplied.
    """
    species: Tuple[str, ...]
    reaction_names: Tuple[str, ...]
    gamma: Optional[RationalMatrix]
    B: ExponentMatrix
    N: RationalMatrix
    selected_rows: Tuple[int, ...]
    W: Optional[RationalMatrix]
    s: int
    name: str = ""

    def __post_init__(self):
        if self.B.shape != (self.n, self.r):
            raise DimensionError(f"B has shape {self.B.shape}, expected {(self.n, self.r)}")
        if self.N.ncols != self.r:
            raise DimensionError(f"N has {self.N.ncols} columns for {self.r} reactions")
        if rank(self.N) != self.s or self.N.nrows != self.s:
            raise BuildError(f"N must have full row rank s = {self.s}")
        if self.W is not None:
            if self.W.shape != (self.d, self.n):
                raise DimensionError(f"W has shape {self.W.shape}, expected {(self.d, self.n)}")
            if rank(self.W) != self.d:
                raise BuildError("rows of W are linearly dependent")
            if self.gamma is not None and not (self.W @ self.gamma).is_zero():
                raise BuildError("W does not annihilate the stoichiometric matrix")

    @property
    def n(self) -> int:
        return len(self.species)

    @property
    def r(self) -> int:
        return len(self.reaction_names)

    @property
    def d(self) -> int:
        return self.n - self.s

    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.B, SymbolicMatrix) and not self.B.is_numeric()

    @property
    def b_symbols(self) -> List[str]:
        return self.B.symbols() if isinstance(self.B, SymbolicMatrix) else []

    @property
    def numeric_B(self) -> RationalMatrix:
        if isinstance(self.B, SymbolicMatrix):
            return self.B.to_rational()
        return self.B

    def species_index(self, name: str) -> int:
        try:
            return self.species.index(name)
        except ValueError:
            raise BuildError(f"unknown species '{name}', expected one of {list(self.species)}")

    def summary(self) -> Dict[str, int]:
        return {"n": self.n, "r": self.r, "s": self.s, "d": self.d}


def _default_rate_names(r: int) -> Tuple[str, ...]:
    return tuple(f"k{j + 1}" for j in range(r))


def build_system(net: Network,
                 kinetics: Union[Kinetics, ExponentMatrix] = Kinetics.MASS_ACTION,
                 name: str = "") -> PowerLawSystem:
    """
    Build the power-law system of a network.

    Args:
        net: The reaction network
        kinetics: Kinetics.MASS_ACTION (B = reactant coefficients) or an
            explicit n x r exponent matrix (rational or symbolic)
        name: Label carried into reports

    Raises:
        BuildError: If the stoichiometric matrix is zero
        DimensionError: If an explicit B has the wrong shape
    """
    gamma = net.stoichiometric_matrix()
    if gamma.is_zero():
        raise BuildError("stoichiometric matrix is zero")

    if kinetics is Kinetics.MASS_ACTION:
        B: ExponentMatrix = net.reactant_matrix()
    else:
        B = kinetics
        if B.shape != (net.n, net.r):
            raise DimensionError(f"kinetics block has shape {B.shape}, expected {(net.n, net.r)}")
        if isinstance(B, SymbolicMatrix) and B.is_numeric():
            B = B.to_rational()

    selected, N = select_independent_rows(gamma)
    W = RationalMatrix.from_rows(left_kernel_basis(gamma), ncols=net.n)
    logger.debug("built system %s: n=%d r=%d s=%d", name or "<anonymous>", net.n, net.r, len(selected))
    return PowerLawSystem(
        species=net.species,
        reaction_names=tuple(rx.rate_symbol for rx in net.reactions),
        gamma=gamma,
        B=B,
        N=N,
        selected_rows=tuple(selected),
        W=W,
        s=len(selected),
        name=name,
    )


def system_from_matrices(N: RationalMatrix, B: ExponentMatrix,
                         W: Optional[RationalMatrix] = None,
                         species: Optional[Sequence[str]] = None,
                         reaction_names: Optional[Sequence[str]] = None,
                         name: str = "") -> PowerLawSystem:
    """
    Build a power-law system from its coefficient and exponent matrices.

    Dependent rows of N are dropped with a warning. Without W, a system with
    d = 0 gets the empty conservation matrix and one with d >= 1 keeps W unset.
    """
    n, r = B.shape
    if N.ncols != r:
        raise DimensionError(f"N has {N.ncols} columns but B has {r}")
    if N.is_zero():
        raise BuildError("coefficient matrix N is zero")
    if isinstance(B, SymbolicMatrix) and B.is_numeric():
        B = B.to_rational()
    selected, reduced = select_independent_rows(N)
    if len(selected) < N.nrows:
        logger.warning("dropping dependent rows of N; keeping %s", selected)
    s = len(selected)
    if s > n:
        raise BuildError(f"rank of N ({s}) exceeds the number of species ({n})")
    if W is None and s == n:
        W = RationalMatrix.zeros(0, n)
    species = tuple(species) if species else tuple(f"X{i + 1}" for i in range(n))
    if len(species) != n:
        raise DimensionError(f"{len(species)} species names for {n} rows of B")
    names = tuple(reaction_names) if reaction_names else _default_rate_names(r)
    return PowerLawSystem(
        species=species,
        reaction_names=names,
        gamma=None,
        B=B,
        N=reduced,
        selected_rows=tuple(selected),
        W=W,
        s=s,
        name=name,
    )


# ---------------------------------------------------------------------------
# Generalized polynomials and polynomialization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralizedPolynomialSystem:
    """
    g_i(x) = sum_t C[i, t] x^E[:, t] with rational exponents.

    Attributes:
        variables: Variable names, one per row of exponents
        coefficients: Equations x terms
        exponents: Variables x terms
    """
    variables: Tuple[str, ...]
    coefficients: RationalMatrix
    exponents: RationalMatrix

    def __post_init__(self):
        if self.exponents.nrows != len(self.variables):
            raise DimensionError(
                f"{self.exponents.nrows} exponent rows for {len(self.variables)} variables"
            )
        if self.coefficients.ncols != self.exponents.ncols:
            raise DimensionError("coefficient and exponent matrices disagree on the term count")

    @classmethod
    def from_system(cls, system: PowerLawSystem,
                    k: Optional[Sequence[Fraction]] = None) -> "GeneralizedPolynomialSystem":
        """N diag(k) x^B with equal exponent columns merged and vanishing terms dropped."""
        B = system.numeric_B
        k = [Fraction(1)] * system.r if k is None else [to_fraction(v) for v in k]
        if len(k) != system.r:
            raise DimensionError(f"{len(k)} rate constants for {system.r} reactions")
        merged: Dict[Tuple[Fraction, ...], List[Fraction]] = {}
        for j in range(system.r):
            column = merged.setdefault(B.col(j), [Fraction(0)] * system.s)
            for i in range(system.s):
                column[i] += system.N[i, j] * k[j]
        kept = [(exp, coeffs) for exp, coeffs in merged.items() if any(coeffs)]
        coefficients = RationalMatrix.from_rows(
            [[coeffs[i] for _, coeffs in kept] for i in range(system.s)], ncols=len(kept)
        )
        exponents = RationalMatrix.from_rows(
            [[exp[v] for exp, _ in kept] for v in range(system.n)], ncols=len(kept)
        )
        return cls(system.species, coefficients, exponents)

    @property
    def n_equations(self) -> int:
        return self.coefficients.nrows

    @property
    def n_terms(self) -> int:
        return self.coefficients.ncols

    def equation_terms(self, i: int) -> List[Tuple[Tuple[Fraction, ...], Fraction]]:
        return [(self.exponents.col(t), self.coefficients[i, t])
                for t in range(self.n_terms) if self.coefficients[i, t] != 0]

    def is_polynomial(self) -> bool:
        return all(e.denominator == 1 and e >= 0
                   for i in range(self.n_equations)
                   for exp, _ in self.equation_terms(i) for e in exp)

    def evaluate(self, x: Sequence[float]) -> np.ndarray:
        x = _positive_array(x, len(self.variables))
        monomials = np.prod(x[:, None] ** self.exponents.to_numpy(), axis=0)
        return self.coefficients.to_numpy() @ monomials

    def jacobian(self, x: Sequence[float]) -> np.ndarray:
        x = _positive_array(x, len(self.variables))
        E = self.exponents.to_numpy()
        monomials = np.prod(x[:, None] ** E, axis=0)
        # d/dx_j x^E_t = E[j, t] x^E_t / x_j
        return self.coefficients.to_numpy() @ (E * monomials[None, :] / x[:, None]).T

    def as_polys(self) -> List[MultiPoly]:
        """Equations as ring elements; requires non-negative integer exponents."""
        if not self.is_polynomial():
            raise DomainError("system has rational or negative exponents")
        ring = poly_ring(self.variables)
        polys = []
        for i in range(self.n_equations):
            terms: Dict[Tuple[int, ...], Fraction] = {}
            for exp, coeff in self.equation_terms(i):
                key = tuple(int(e) for e in exp)
                terms[key] = terms.get(key, Fraction(0)) + coeff
            polys.append(from_terms(ring, terms))
        return polys

    def format_equations(self) -> List[str]:
        if self.is_polynomial():
            return [str(p) for p in self.as_polys()]
        lines = []
        for i in range(self.n_equations):
            parts = []
            for exp, coeff in self.equation_terms(i):
                factors = [v if e == 1 else f"{v}^({e})"
                           for v, e in zip(self.variables, exp) if e != 0]
                parts.append(" * ".join([str(coeff)] + factors))
            lines.append(" + ".join(parts) if parts else "0")
        return lines


@dataclass(frozen=True)
class PolynomializedSystem:
    """Result of clearing rational exponents: gtilde(z) and the map phi"""
    m: Tuple[int, ...]
    beta: Tuple[Tuple[int, ...], ...]
    gtilde: GeneralizedPolynomialSystem
    source: GeneralizedPolynomialSystem = field(repr=False)

    @property
    def is_identity(self) -> bool:
        return all(v == 1 for v in self.m) and not any(any(b) for b in self.beta)


def polynomialize(g: GeneralizedPolynomialSystem) -> PolynomializedSystem:
    """
    Clear rational exponents by z_j -> z_j^{m_j} and shift each equation by
    the smallest monomial z^beta(i) making every exponent non-negative.
    """
    n = len(g.variables)
    used_terms = [t for t in range(g.n_terms)
                  if any(g.coefficients[i, t] != 0 for i in range(g.n_equations))]
    m = tuple(
        lcm(*(abs(g.exponents[j, t]).denominator for t in used_terms)) if used_terms else 1
        for j in range(n)
    )

    betas: List[Tuple[int, ...]] = []
    rows: List[List[Fraction]] = []
    columns: List[Tuple[int, ...]] = []
    for i in range(g.n_equations):
        terms = g.equation_terms(i)
        scaled = [(tuple(int(m[j] * exp[j]) for j in range(n)), coeff) for exp, coeff in terms]
        beta = tuple(max(0, -min((exp[j] for exp, _ in scaled), default=0)) for j in range(n))
        betas.append(beta)
        for exp, coeff in scaled:
            shifted = tuple(e + b for e, b in zip(exp, beta))
            columns.append(shifted)
            rows.append([coeff if row == i else Fraction(0) for row in range(g.n_equations)])

    z_names = tuple(f"z{j + 1}" for j in range(n))
    gtilde = GeneralizedPolynomialSystem(
        z_names,
        RationalMatrix.from_rows(
            [[rows[t][i] for t in range(len(columns))] for i in range(g.n_equations)],
            ncols=len(columns),
        ),
        RationalMatrix.from_rows(
            [[columns[t][j] for t in range(len(columns))] for j in range(n)],
            ncols=len(columns),
        ),
    )
    logger.debug("polynomialized with m=%s beta=%s", m, betas)
    return PolynomializedSystem(m=m, beta=tuple(betas), gtilde=gtilde, source=g)


def _positive_array(values: Sequence[float], length: int) -> np.ndarray:
    array = np.asarray([float(v) for v in values], dtype=float)
    if array.shape != (length,):
        raise DimensionError(f"expected a vector of length {length}, got {array.shape}")
    if not np.all(array > 0):
        raise DomainError(f"vector must be strictly positive, got {array.tolist()}")
    return array


def phi(z: Sequence[float], m: Sequence[int]) -> np.ndarray:
    """Componentwise z_j^{m_j} on the positive orthant."""
    z = _positive_array(z, len(m))
    return z ** np.asarray(m, dtype=float)


def phi_inverse(x: Sequence[float], m: Sequence[int]) -> np.ndarray:
    """Componentwise positive m_j-th root."""
    x = _positive_array(x, len(m))
    return x ** (1.0 / np.asarray(m, dtype=float))
