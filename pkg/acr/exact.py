"""
Exact algebra over the rationals and over polynomial rings.

Rationals are ``fractions.Fraction``. Sparse multivariate polynomials are
sympy ``PolyElement`` objects living in a ``PolyRing`` over ``QQ`` with graded
lexicographic term order, so printing is canonical. Ranks and kernels come
from fraction-free Gauss-Jordan elimination on integer ``DomainMatrix``
objects; determinants of polynomial matrices use a memoized Laplace expansion.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import DimensionError, UnknownVariableError

logger = logging.getLogger(__name__)

MultiPoly = PolyElement
IntVector = Tuple[int, ...]
RationalLike = Union[int, Fraction, str]


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------

def to_fraction(value: Any) -> Fraction:
    """Convert ints, Fractions, 'p/q' strings and QQ/ZZ elements to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def to_qq(value: RationalLike) -> Any:
    f = to_fraction(value)
    return QQ(f.numerator, f.denominator)


def format_fraction(value: Fraction) -> str:
    return str(value)


def canonical_vector(values: Sequence[RationalLike]) -> IntVector:
    """
    Scale a rational vector to integers with content 1 and first nonzero
    entry positive. The zero vector maps to itself.
    """
    fractions_ = [to_fraction(v) for v in values]
    denominator = lcm(*(f.denominator for f in fractions_)) if fractions_ else 1
    ints = [int(f * denominator) for f in fractions_]
    content = 0
    for v in ints:
        content = gcd(content, v)
    if content == 0:
        return tuple(ints)
    ints = [v // content for v in ints]
    first = next(v for v in ints if v != 0)
    if first < 0:
        ints = [-v for v in ints]
    return tuple(ints)


# ---------------------------------------------------------------------------
# Rational matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalMatrix:
    """Immutable row-major matrix of Fractions."""
    data: Tuple[Tuple[Fraction, ...], ...]
    ncols: int

    def __post_init__(self):
        for row in self.data:
            if len(row) != self.ncols:
                raise DimensionError(
                    f"row of length {len(row)} in a matrix with {self.ncols} columns"
                )

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[RationalLike]],
                  ncols: Optional[int] = None) -> "RationalMatrix":
        data = tuple(tuple(to_fraction(v) for v in row) for row in rows)
        if ncols is None:
            if not data:
                raise DimensionError("ncols is required for a matrix without rows")
            ncols = len(data[0])
        return cls(data, ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        return cls(tuple((Fraction(0),) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.data)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.data[i][j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.data[i]

    def col(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(row[j] for row in self.data)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(self.col(j) for j in range(self.ncols)), self.nrows)

    def submatrix(self, rows: Optional[Sequence[int]] = None,
                  cols: Optional[Sequence[int]] = None) -> "RationalMatrix":
        rows = range(self.nrows) if rows is None else rows
        cols = range(self.ncols) if cols is None else cols
        cols = list(cols)
        return RationalMatrix(tuple(tuple(self.data[i][j] for j in cols) for i in rows), len(cols))

    def vstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.ncols != self.ncols:
            raise DimensionError(f"cannot stack {self.shape} on {other.shape}")
        return RationalMatrix(self.data + other.data, self.ncols)

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.col(j) for j in range(other.ncols)]
        return RationalMatrix(
            tuple(tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols)
                  for row in self.data),
            other.ncols,
        )

    __matmul__ = matmul

    def apply(self, vector: Sequence[RationalLike]) -> Tuple[Fraction, ...]:
        """Matrix-vector product."""
        if len(vector) != self.ncols:
            raise DimensionError(f"vector of length {len(vector)} for {self.shape} matrix")
        vec = [to_fraction(v) for v in vector]
        return tuple(sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in self.data)

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.data for v in row)

    def is_integer(self) -> bool:
        return all(v.denominator == 1 for row in self.data for v in row)

    def to_list(self) -> List[List[Fraction]]:
        return [list(row) for row in self.data]

    def to_strings(self) -> List[List[str]]:
        return [[format_fraction(v) for v in row] for row in self.data]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.data], dtype=float).reshape(
            self.nrows, self.ncols
        )

    def __str__(self) -> str:
        if not self.data:
            return f"[] ({self.nrows}x{self.ncols})"
        cells = self.to_strings()
        width = max(len(c) for row in cells for c in row) if self.ncols else 0
        return "\n".join("[" + "  ".join(c.rjust(width) for c in row) + "]" for row in cells)


def _integer_domain_matrix(m: RationalMatrix) -> DomainMatrix:
    # Row scaling by positive integers preserves rank, row space and kernel.
    rows = []
    for row in m.data:
        denominator = lcm(*(v.denominator for v in row)) if row else 1
        rows.append([int(v * denominator) for v in row])
    return DomainMatrix.from_list(rows, ZZ)


def _rref(m: RationalMatrix) -> Tuple[List[List[int]], int, Tuple[int, ...]]:
    if m.nrows == 0 or m.ncols == 0:
        return [], 1, ()
    rref, denominator, pivots = _integer_domain_matrix(m).rref_den(method="FF")
    rows = [[int(v) for v in row] for row in rref.to_list()]
    return rows, int(denominator), tuple(pivots)


def rank(m: RationalMatrix) -> int:
    """Rank over the rationals via fraction-free elimination."""
    return len(_rref(m)[2])


def kernel_basis(m: RationalMatrix) -> List[IntVector]:
    """
    Canonical basis of the right kernel of m.

    One vector per non-pivot column (in index order), read off the reduced
    row-echelon form and scaled by canonical_vector.
    """
    rows, denominator, pivots = _rref(m)
    basis = []
    for free in (j for j in range(m.ncols) if j not in pivots):
        vector = [0] * m.ncols
        vector[free] = denominator
        for i, p in enumerate(pivots):
            vector[p] = -rows[i][free]
        basis.append(canonical_vector(vector))
    logger.debug("kernel of %dx%d matrix has dimension %d", m.nrows, m.ncols, len(basis))
    return basis


def free_columns(m: RationalMatrix) -> Tuple[int, ...]:
    """Non-pivot columns of the reduced row-echelon form, one per kernel_basis vector."""
    pivots = _rref(m)[2]
    return tuple(j for j in range(m.ncols) if j not in pivots)


def left_kernel_basis(m: RationalMatrix) -> List[IntVector]:
    """Canonical basis of {w : w m = 0}."""
    return kernel_basis(m.transpose())


def select_independent_rows(m: RationalMatrix) -> Tuple[List[int], RationalMatrix]:
    """Greedy top-down scan keeping each row that raises the rank."""
    chosen: List[int] = []
    for i in range(m.nrows):
        if rank(m.submatrix(chosen + [i])) > len(chosen):
            chosen.append(i)
    return chosen, m.submatrix(chosen)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

class SignProfile(Enum):
    """Signs of the coefficients of a polynomial"""
    ALL_POSITIVE = "ALL_POSITIVE"
    ALL_NEGATIVE = "ALL_NEGATIVE"
    MIXED = "MIXED"
    ZERO = "ZERO"


def poly_ring(names: Sequence[str]) -> PolyRing:
    """Polynomial ring over QQ in the given variables, graded-lex ordered."""
    return PolyRing(list(names), QQ, grlex)


def variable_names(ring: PolyRing) -> List[str]:
    return [str(symbol) for symbol in ring.symbols]


def variable_index(ring: PolyRing, name: str) -> int:
    try:
        return variable_names(ring).index(name)
    except ValueError:
        raise UnknownVariableError(f"variable '{name}' is not one of {variable_names(ring)}")


def generator(ring: PolyRing, name: str) -> MultiPoly:
    return ring.gens[variable_index(ring, name)]


def constant(ring: PolyRing, value: RationalLike) -> MultiPoly:
    return ring.ground_new(to_qq(value))


def from_terms(ring: PolyRing, terms: Mapping[Tuple[int, ...], RationalLike]) -> MultiPoly:
    return ring.from_dict({monom: to_qq(c) for monom, c in terms.items() if to_fraction(c) != 0})


def lift_poly(p: MultiPoly, ring: PolyRing) -> MultiPoly:
    """Embed p into a ring whose variables include all of p's."""
    positions = [variable_index(ring, name) for name in variable_names(p.ring)]
    terms = {}
    for monom, coeff in p.iterterms():
        exponents = [0] * ring.ngens
        for position, exponent in zip(positions, monom):
            exponents[position] = exponent
        terms[tuple(exponents)] = coeff
    return ring.from_dict(terms)


def is_zero(p: MultiPoly) -> bool:
    return not p


def sign_profile(p: MultiPoly) -> SignProfile:
    coeffs = list(p.itercoeffs())
    if not coeffs:
        return SignProfile.ZERO
    if all(c > 0 for c in coeffs):
        return SignProfile.ALL_POSITIVE
    if all(c < 0 for c in coeffs):
        return SignProfile.ALL_NEGATIVE
    return SignProfile.MIXED


def is_same_sign(p: MultiPoly) -> bool:
    """Nonzero with all coefficients of one sign."""
    return sign_profile(p) in (SignProfile.ALL_POSITIVE, SignProfile.ALL_NEGATIVE)


def divisible_by(p: MultiPoly, var: str) -> bool:
    """True iff every term of p contains var (the zero polynomial included)."""
    index = variable_index(p.ring, var)
    return all(monom[index] > 0 for monom in p.itermonoms())


def evaluate(p: MultiPoly, point: Mapping[str, RationalLike]) -> Fraction:
    """Exact value of p at a point given by variable name."""
    names = variable_names(p.ring)
    values = []
    for i, name in enumerate(names):
        if name in point:
            values.append(to_fraction(point[name]))
        elif any(monom[i] for monom in p.itermonoms()):
            raise UnknownVariableError(f"no value supplied for variable '{name}'")
        else:
            values.append(Fraction(0))
    total = Fraction(0)
    for monom, coeff in p.iterterms():
        term = to_fraction(coeff)
        for value, exponent in zip(values, monom):
            if exponent:
                term *= value ** exponent
        total += term
    return total


def normalized(p: MultiPoly) -> MultiPoly:
    """Primitive representative with positive leading coefficient."""
    if not p:
        return p
    _, q = p.primitive()
    return -q if q.LC < 0 else q


def format_poly(p: MultiPoly) -> str:
    """Canonical string, terms in graded lexicographic order."""
    return str(p)


# ---------------------------------------------------------------------------
# Polynomial matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyMatrix:
    """Immutable matrix of polynomials sharing one ring."""
    ring: PolyRing
    data: Tuple[Tuple[MultiPoly, ...], ...]
    ncols: int

    def __post_init__(self):
        for row in self.data:
            if len(row) != self.ncols:
                raise DimensionError(
                    f"row of length {len(row)} in a matrix with {self.ncols} columns"
                )
            for entry in row:
                if entry.ring != self.ring:
                    raise DimensionError("all entries of a PolyMatrix must share one ring")

    @classmethod
    def from_rows(cls, ring: PolyRing, rows: Iterable[Iterable[Any]],
                  ncols: Optional[int] = None) -> "PolyMatrix":
        def lift(entry):
            if isinstance(entry, PolyElement):
                return entry
            return constant(ring, entry)
        data = tuple(tuple(lift(e) for e in row) for row in rows)
        if ncols is None:
            if not data:
                raise DimensionError("ncols is required for a matrix without rows")
            ncols = len(data[0])
        return cls(ring, data, ncols)

    @classmethod
    def from_rational(cls, ring: PolyRing, m: RationalMatrix) -> "PolyMatrix":
        return cls.from_rows(ring, m.data, m.ncols)

    @property
    def nrows(self) -> int:
        return len(self.data)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def variables(self) -> List[str]:
        return variable_names(self.ring)

    def __getitem__(self, index: Tuple[int, int]) -> MultiPoly:
        i, j = index
        return self.data[i][j]

    def submatrix(self, rows: Optional[Sequence[int]] = None,
                  cols: Optional[Sequence[int]] = None) -> "PolyMatrix":
        rows = range(self.nrows) if rows is None else rows
        cols = list(range(self.ncols) if cols is None else cols)
        return PolyMatrix(self.ring, tuple(tuple(self.data[i][j] for j in cols) for i in rows),
                          len(cols))

    def vstack(self, other: "PolyMatrix") -> "PolyMatrix":
        if other.ncols != self.ncols or other.ring != self.ring:
            raise DimensionError(f"cannot stack {self.shape} on {other.shape}")
        return PolyMatrix(self.ring, self.data + other.data, self.ncols)

    def scale_columns(self, factors: Sequence[MultiPoly]) -> "PolyMatrix":
        if len(factors) != self.ncols:
            raise DimensionError(f"{len(factors)} column factors for {self.ncols} columns")
        return PolyMatrix(self.ring,
                          tuple(tuple(e * f for e, f in zip(row, factors)) for row in self.data),
                          self.ncols)

    def evaluate(self, point: Mapping[str, RationalLike]) -> RationalMatrix:
        return RationalMatrix(tuple(tuple(evaluate(e, point) for e in row) for row in self.data),
                              self.ncols)

    def is_zero(self) -> bool:
        return all(not e for row in self.data for e in row)

    def to_strings(self) -> List[List[str]]:
        return [[format_poly(e) for e in row] for row in self.data]

    def __str__(self) -> str:
        cells = self.to_strings()
        if not cells:
            return "[]"
        width = max(len(c) for row in cells for c in row) if self.ncols else 0
        return "\n".join("[" + "  ".join(c.rjust(width) for c in row) + "]" for row in cells)


@dataclass(frozen=True)
class Minor:
    """A square minor: its row set, column set and exact value"""
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]
    value: MultiPoly


class _LaplaceExpander:
    """
    Determinants of square submatrices by first-row Laplace expansion.

    Subdeterminants are cached on (row tuple, column tuple), so one expander
    shared across a minor enumeration reuses every common block.
    """

    def __init__(self, m: PolyMatrix):
        self.m = m
        self._cache: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], MultiPoly] = {}

    def det(self, rows: Tuple[int, ...], cols: Tuple[int, ...]) -> MultiPoly:
        if not rows:
            return self.m.ring.one
        key = (rows, cols)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        head, rest = rows[0], rows[1:]
        total = self.m.ring.zero
        for position, c in enumerate(cols):
            entry = self.m.data[head][c]
            if not entry:
                continue
            sub = self.det(rest, cols[:position] + cols[position + 1:])
            if not sub:
                continue
            if position % 2:
                total = total - entry * sub
            else:
                total = total + entry * sub
        self._cache[key] = total
        return total


def poly_det(m: PolyMatrix) -> MultiPoly:
    """Exact determinant of a square polynomial matrix."""
    if m.nrows != m.ncols:
        raise DimensionError(f"determinant of non-square {m.nrows}x{m.ncols} matrix")
    return _LaplaceExpander(m).det(tuple(range(m.nrows)), tuple(range(m.ncols)))


def minors(m: PolyMatrix, size: int, excluded_cols: Iterable[int] = ()) -> List[Minor]:
    """
    All size x size minors avoiding excluded_cols.

    Ordered lexicographically by column set, then by row set. When m has
    exactly `size` rows the row set is always all rows.
    """
    excluded = set(excluded_cols)
    for c in excluded:
        if not 0 <= c < m.ncols:
            raise DimensionError(f"excluded column {c} outside 0..{m.ncols - 1}")
    allowed = [c for c in range(m.ncols) if c not in excluded]
    if size < 0 or size > m.nrows or size > len(allowed):
        raise DimensionError(
            f"minor size {size} too large for {m.nrows} rows and {len(allowed)} usable columns"
        )
    expander = _LaplaceExpander(m)
    row_sets = list(combinations(range(m.nrows), size))
    return [
        Minor(rows, cols, expander.det(rows, cols))
        for cols in combinations(allowed, size)
        for rows in row_sets
    ]
