"""
Extreme rays of the flux cone ker(N) ∩ R^r_{>=0}.

Double description: the canonical kernel basis, each vector oriented positively
on its own free coordinate, generates the simplicial cone cut out by the
free-coordinate inequalities. The remaining inequalities v_j >= 0 (pivot
coordinates) are then added one at a time; rays on the wrong side are dropped
and every adjacent (positive, negative) pair contributes the combination that
lies on the hyperplane v_j = 0. Adjacency is the combinatorial test on zero
sets of the inequalities processed so far.
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import FrozenSet, List, Sequence, Tuple

from .exact import IntVector, RationalMatrix, canonical_vector, free_columns, kernel_basis

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConeRays:
    """Minimal generators of ker(N) ∩ R^r_{>=0}, canonical and sorted"""
    rays: Tuple[IntVector, ...]
    dimension: int

    @property
    def is_trivial(self) -> bool:
        return not self.rays

    def ray_sum(self) -> IntVector:
        return tuple(sum(ray[j] for ray in self.rays) for j in range(self.dimension))

    @property
    def has_positive_point(self) -> bool:
        """ker(N) meets the open orthant iff the sum of the rays is strictly positive."""
        return bool(self.rays) and all(v > 0 for v in self.ray_sum())

    def to_strings(self) -> List[str]:
        return ["(" + ", ".join(str(v) for v in ray) + ")" for ray in self.rays]


def _primitive(vector: Sequence[int]) -> IntVector:
    content = 0
    for v in vector:
        content = gcd(content, v)
    return tuple(v // content for v in vector) if content else tuple(vector)


def _zero_set(ray: IntVector, processed: Sequence[int]) -> FrozenSet[int]:
    return frozenset(j for j in processed if ray[j] == 0)


def _adjacent(p: int, q: int, zero_sets: List[FrozenSet[int]]) -> bool:
    common = zero_sets[p] & zero_sets[q]
    return not any(
        common <= zero_sets[other]
        for other in range(len(zero_sets))
        if other not in (p, q)
    )


def extreme_rays(N: RationalMatrix) -> ConeRays:
    """
    Compute the extreme rays of ker(N) ∩ R^r_{>=0}.

    Returns:
        ConeRays with integer content-1 rays in lexicographic order
    """
    r = N.ncols
    free = free_columns(N)
    rays: List[IntVector] = []
    for vector, f in zip(kernel_basis(N), free):
        rays.append(vector if vector[f] > 0 else tuple(-v for v in vector))

    processed: List[int] = list(free)
    for j in (c for c in range(r) if c not in free):
        positive = [ray for ray in rays if ray[j] > 0]
        negative = [ray for ray in rays if ray[j] < 0]
        if not negative:
            processed.append(j)
            continue
        zero_sets = [_zero_set(ray, processed) for ray in rays]
        index = {ray: i for i, ray in enumerate(rays)}
        combined = []
        for p in positive:
            for q in negative:
                if _adjacent(index[p], index[q], zero_sets):
                    combined.append(_primitive([p[j] * b - q[j] * a for a, b in zip(p, q)]))
        rays = [ray for ray in rays if ray[j] >= 0] + combined
        rays = list(dict.fromkeys(rays))
        processed.append(j)
        logger.debug("after v_%d >= 0: %d rays", j, len(rays))

    canonical = sorted({canonical_vector(ray) for ray in rays if any(ray)})
    return ConeRays(tuple(canonical), r)
