"""
Tests for networks, power-law systems and polynomialization.
"""

import dataclasses
import logging
from fractions import Fraction

import numpy as np
import pytest

from acr.errors import BuildError, DimensionError, DomainError
from acr.exact import RationalMatrix
from acr.network import (
    GeneralizedPolynomialSystem,
    Kinetics,
    Network,
    Reaction,
    SymbolicMatrix,
    build_system,
    phi,
    phi_inverse,
    polynomialize,
    system_from_matrices,
)


def _shinar_feinberg_network() -> Network:
    return Network(
        species=("X1", "X2"),
        reactions=(
            Reaction((1, 1), (0, 2), "k1"),
            Reaction((0, 1), (1, 0), "k2"),
        ),
    )


# -- networks ----------------------------------------------------------------

def test_stoichiometric_and_reactant_matrices():
    net = _shinar_feinberg_network()
    assert net.stoichiometric_matrix().to_strings() == [["-1", "1"], ["1", "-1"]]
    assert net.reactant_matrix().to_strings() == [["1", "0"], ["1", "1"]]


def test_reaction_validation():
    with pytest.raises(BuildError):
        Reaction((1, 0), (1, 0), "k1")
    with pytest.raises(BuildError):
        Reaction((-1, 0), (0, 1), "k1")
    with pytest.raises(DimensionError):
        Reaction((1, 0), (0, 1, 0), "k1")


def test_network_validation():
    with pytest.raises(BuildError):
        Network(("A", "A"), (Reaction((1, 0), (0, 1), "k1"),))
    with pytest.raises(BuildError):
        Network(("A", "B"), ())
    with pytest.raises(BuildError):
        Network(("A", "B"), (Reaction((1, 0), (0, 1), "k1"), Reaction((0, 1), (1, 0), "k1")))


# -- systems -----------------------------------------------------------------

def test_build_system_mass_action():
    system = build_system(_shinar_feinberg_network(), name="sf")
    assert system.selected_rows == (0,)
    assert system.N.to_strings() == [["-1", "1"]]
    assert system.W.to_strings() == [["1", "1"]]
    assert system.summary() == {"n": 2, "r": 2, "s": 1, "d": 1}
    assert system.B.to_strings() == [["1", "0"], ["1", "1"]]
    assert not system.is_symbolic


def test_build_system_with_explicit_kinetics():
    net = _shinar_feinberg_network()
    B = RationalMatrix.from_rows([["1/2", 0], [1, 2]])
    system = build_system(net, B)
    assert system.numeric_B == B
    with pytest.raises(DimensionError):
        build_system(net, RationalMatrix.from_rows([[1, 0, 0], [1, 1, 1]]))


def test_build_system_symbolic_kinetics():
    net = _shinar_feinberg_network()
    B = SymbolicMatrix(((Fraction(1), Fraction(0)), ("b21", "b22")), 2)
    system = build_system(net, B)
    assert system.is_symbolic
    assert system.b_symbols == ["b21", "b22"]
    with pytest.raises(BuildError):
        system.numeric_B


def test_numeric_symbolic_matrix_collapses_to_rational():
    net = _shinar_feinberg_network()
    B = SymbolicMatrix(((Fraction(1), Fraction(0)), (Fraction(1), Fraction(1))), 2)
    system = build_system(net, B)
    assert isinstance(system.B, RationalMatrix)


def test_zero_coefficient_matrix_rejected():
    net = Network(("A", "B"), (Reaction((1, 0), (0, 1), "k1"), Reaction((1, 0), (0, 1), "k2")))
    assert build_system(net).s == 1
    with pytest.raises(BuildError):
        system_from_matrices(RationalMatrix.zeros(1, 2),
                             RationalMatrix.from_rows([[1, 0], [0, 1]]))


def test_species_index():
    system = build_system(_shinar_feinberg_network())
    assert system.species_index("X2") == 1
    with pytest.raises(BuildError):
        system.species_index("X9")


def test_system_from_matrices_drops_dependent_rows(caplog):
    N = RationalMatrix.from_rows([[1, -2, 1], [2, -4, 2]])
    B = RationalMatrix.from_rows([[3, 2, 1], [1, 1, 1]])
    with caplog.at_level(logging.WARNING, logger="acr.network"):
        system = system_from_matrices(N, B)
    assert system.s == 1
    assert system.N.to_strings() == [["1", "-2", "1"]]
    assert system.species == ("X1", "X2")
    assert system.reaction_names == ("k1", "k2", "k3")
    assert system.W is None
    assert system.gamma is None
    assert "dependent rows" in caplog.text


def test_system_from_matrices_full_rank_gets_empty_w():
    N = RationalMatrix.from_rows([[1, -1, 0], [0, 1, -1]])
    B = RationalMatrix.from_rows([[1, 0, 0], [0, 1, 0]])
    system = system_from_matrices(N, B)
    assert system.d == 0
    assert system.W.shape == (0, 2)


def test_system_from_matrices_shape_errors():
    B = RationalMatrix.from_rows([[1, 0], [0, 1]])
    with pytest.raises(DimensionError):
        system_from_matrices(RationalMatrix.from_rows([[1, -1, 0]]), B)
    with pytest.raises(DimensionError):
        system_from_matrices(RationalMatrix.from_rows([[1, -1]]), B,
                             W=RationalMatrix.from_rows([[1, 1, 1]]))
    with pytest.raises(DimensionError):
        system_from_matrices(RationalMatrix.from_rows([[1, -1]]), B, species=["A"])
    with pytest.raises(BuildError):
        system_from_matrices(RationalMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
                             RationalMatrix.from_rows([[1, 0, 0], [0, 1, 0]]))


def test_w_must_annihilate_gamma():
    system = build_system(_shinar_feinberg_network())
    with pytest.raises(BuildError):
        dataclasses.replace(system, W=RationalMatrix.from_rows([[1, 2]]))
    with pytest.raises(BuildError):
        dataclasses.replace(system, W=RationalMatrix.from_rows([[0, 0]]))


# -- generalized polynomials -------------------------------------------------

def test_generalized_system_merges_equal_exponent_columns():
    N = RationalMatrix.from_rows([[1, -1, 2]])
    B = RationalMatrix.from_rows([[1, 1, 0]])
    system = system_from_matrices(N, B)
    g = GeneralizedPolynomialSystem.from_system(system, [1, 1, 1])
    # the first two columns share x1 and cancel
    assert g.n_terms == 1
    assert g.format_equations() == ["2"]


def test_generalized_system_evaluate_and_jacobian(load_example):
    document = load_example("rational-exponents")
    g = GeneralizedPolynomialSystem.from_system(document.system, document.rates)
    x = np.array([2.0, 3.0])
    value = 2.0 * 3.0 ** (2 / 3) - 2 * 2.0 ** (2 / 3) * 3.0 ** (2 / 3) + 2.0 ** (-1 / 3) * 3.0 ** (2 / 3)
    np.testing.assert_allclose(g.evaluate(x), [value])
    step = 1e-6
    numeric = [(g.evaluate(x + step * e) - g.evaluate(x - step * e)) / (2 * step) for e in np.eye(2)]
    np.testing.assert_allclose(g.jacobian(x), np.array(numeric).T, rtol=1e-6)
    with pytest.raises(DomainError):
        g.evaluate([0.0, 1.0])
    with pytest.raises(DomainError):
        g.as_polys()


def test_polynomialize_rational_exponents(load_example):
    document = load_example("rational-exponents")
    g = GeneralizedPolynomialSystem.from_system(document.system, document.rates)
    result = polynomialize(g)
    assert result.m == (3, 3)
    assert result.beta == ((1, 0),)
    assert not result.is_identity
    assert result.gtilde.format_equations() == ["z1**4*z2**2 - 2*z1**3*z2**2 + z2**2"]


def test_polynomialize_positive_roots_correspond(load_example):
    document = load_example("rational-exponents")
    g = GeneralizedPolynomialSystem.from_system(document.system, document.rates)
    result = polynomialize(g)
    roots = [r.real for r in np.roots([1, -2, 0, 0, 1]) if abs(r.imag) < 1e-9 and r.real > 0]
    roots.sort()
    assert len(roots) == 2
    assert roots[0] == pytest.approx(1.0)
    assert 1.8 < roots[1] < 1.9
    for root in roots:
        z = np.array([root, 1.3])
        assert abs(result.gtilde.evaluate(z)[0]) < 1e-8
        assert abs(g.evaluate(phi(z, result.m))[0]) < 1e-8
        np.testing.assert_allclose(phi_inverse(phi(z, result.m), result.m), z)


def test_polynomialize_identity_for_mass_action(shinar_feinberg):
    g = GeneralizedPolynomialSystem.from_system(shinar_feinberg, [1, 2])
    result = polynomialize(g)
    assert result.is_identity
    assert result.gtilde.format_equations() == ["-z1*z2 + 2*z2"]


def test_polynomialize_square_root():
    system = system_from_matrices(RationalMatrix.from_rows([[1, -1]]),
                                  RationalMatrix.from_rows([["1/2", 0]]))
    result = polynomialize(GeneralizedPolynomialSystem.from_system(system))
    assert result.m == (2,)
    assert result.beta == ((0,),)
    assert result.gtilde.format_equations() == ["z1 - 1"]


def test_phi_powers_componentwise():
    np.testing.assert_allclose(phi([2.0, 3.0], [3, 3]), [8.0, 27.0])
    np.testing.assert_allclose(phi([2.0, 3.0], [1, 1]), [2.0, 3.0])
    rng = np.random.default_rng(4)
    z = rng.uniform(0.1, 10.0, size=5)
    m = [1, 2, 3, 5, 7]
    np.testing.assert_allclose(phi_inverse(phi(z, m), m), z, rtol=1e-12)


def test_phi_requires_positive_input():
    with pytest.raises(DomainError):
        phi([1.0, -1.0], [2, 2])
    with pytest.raises(DimensionError):
        phi_inverse([1.0], [2, 2])


def test_kinetics_enum_value():
    assert Kinetics.MASS_ACTION.value == "mass-action"
