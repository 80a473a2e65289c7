"""
Tests for extreme-ray enumeration of the flux cone ker(N) ∩ R^r_{>=0}.
"""

import random
from itertools import combinations

import pytest

from acr.cone import extreme_rays
from acr.exact import RationalMatrix, canonical_vector, kernel_basis


def _brute_force_rays(N: RationalMatrix):
    """
    Extreme rays are the non-negative kernel vectors with minimal support:
    exactly those whose support S gives a one-dimensional kernel of N[:, S]
    spanned by a vector of one sign on S.
    """
    rays = set()
    for size in range(1, N.ncols + 1):
        for support in combinations(range(N.ncols), size):
            basis = kernel_basis(N.submatrix(cols=support))
            if len(basis) != 1:
                continue
            w = basis[0]
            if all(v > 0 for v in w) or all(v < 0 for v in w):
                full = [0] * N.ncols
                for c, v in zip(support, w):
                    full[c] = abs(v)
                rays.add(canonical_vector(full))
    return rays


def test_convex_rays_example(convex_rays):
    rays = extreme_rays(convex_rays.N)
    assert rays.rays == ((1, 0, 1, 1), (1, 1, 0, 0))
    assert rays.has_positive_point
    assert rays.to_strings() == ["(1, 0, 1, 1)", "(1, 1, 0, 0)"]
    assert rays.ray_sum() == (2, 1, 1, 1)


def test_single_row_example(lacr_power_law):
    rays = extreme_rays(lacr_power_law.N)
    assert rays.rays == ((0, 1, 2), (2, 1, 0))
    assert rays.dimension == 3


def test_empty_cone_when_kernel_misses_orthant():
    rays = extreme_rays(RationalMatrix.from_rows([[1, 1]]))
    assert rays.is_trivial
    assert not rays.has_positive_point


def test_boundary_cone_has_no_positive_point():
    rays = extreme_rays(RationalMatrix.from_rows([[1, -1, 0], [0, 0, 1]]))
    assert rays.rays == ((1, 1, 0),)
    assert not rays.has_positive_point


def test_trivial_kernel():
    rays = extreme_rays(RationalMatrix.identity(3))
    assert rays.rays == ()
    assert not rays.has_positive_point


def test_whole_orthant_when_n_is_zero_row():
    rays = extreme_rays(RationalMatrix.zeros(1, 3))
    assert rays.rays == ((0, 0, 1), (0, 1, 0), (1, 0, 0))
    assert rays.has_positive_point


@pytest.mark.parametrize("seed", range(30))
def test_rays_match_support_enumeration(seed):
    rng = random.Random(seed)
    r = rng.randint(2, 6)
    s = rng.randint(1, min(3, r - 1))
    N = RationalMatrix.from_rows([[rng.randint(-2, 2) for _ in range(r)] for _ in range(s)])
    rays = extreme_rays(N)
    assert set(rays.rays) == _brute_force_rays(N)
    assert list(rays.rays) == sorted(rays.rays)
    for ray in rays.rays:
        assert not any(N.apply(ray))
        assert all(v >= 0 for v in ray)
