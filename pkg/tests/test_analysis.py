"""
Tests for the convex-parameter Jacobian, local ACR, non-degeneracy and
divisibility.
"""

import dataclasses
import json
import random
from fractions import Fraction
from itertools import product

import pytest

from acr.analysis import (
    AnalysisReport,
    DivisibilityStatus,
    LocalAcr,
    NondegeneracyStatus,
    analyze,
    convex_jacobian,
    divisibility_polynomial,
    divisibility_status,
    divisibility_test,
    excluded_minors,
    flux_jacobian,
    free_jacobian,
    local_acr_test,
    nondegeneracy_test,
    ray_jacobian,
    symbolic_acr_condition,
    verify_acr_verdict,
    verify_nondegeneracy_witness,
)
from acr.cone import extreme_rays
from acr.errors import BuildError, DimensionError
from acr.exact import (
    RationalMatrix,
    SignProfile,
    evaluate,
    format_poly,
    generator,
    poly_det,
    poly_ring,
    rank,
    sign_profile,
)
from acr.network import SymbolicMatrix, system_from_matrices


# -- convex Jacobian ---------------------------------------------------------

def test_convex_jacobian_canonical_basis(lacr_power_law):
    cj = convex_jacobian(lacr_power_law)
    assert cj.kernel_basis == ((2, 1, 0), (1, 0, -1))
    assert cj.param_names == ("a1", "a2")
    assert cj.matrix.to_strings() == [["2*a1 + 2*a2", "0"]]
    assert (cj.s, cj.n) == (1, 2)
    assert not cj.is_symbolic


def test_convex_jacobian_user_basis(lacr_power_law):
    cj = convex_jacobian(lacr_power_law, basis=[(-1, 0, 1), (2, 1, 0)], param_names=["a", "c"])
    assert cj.matrix.to_strings() == [["-2*a + 2*c", "0"]]


def test_convex_jacobian_rejects_bad_bases(lacr_power_law):
    with pytest.raises(BuildError) as excinfo:
        convex_jacobian(lacr_power_law, basis=[(1, 0, 0), (2, 1, 0)])
    assert "not in ker(N)" in str(excinfo.value)
    with pytest.raises(BuildError):
        convex_jacobian(lacr_power_law, basis=[(2, 1, 0)])
    with pytest.raises(BuildError):
        convex_jacobian(lacr_power_law, basis=[(2, 1, 0), (4, 2, 0)])
    with pytest.raises(DimensionError):
        convex_jacobian(lacr_power_law, basis=[(2, 1)])
    with pytest.raises(DimensionError):
        convex_jacobian(lacr_power_law, param_names=["a"])
    with pytest.raises(BuildError):
        convex_jacobian(lacr_power_law, param_names=["a", "a"])


def test_ray_jacobian_on_convex_rays(convex_rays):
    rays = extreme_rays(convex_rays.N)
    cj = ray_jacobian(convex_rays, rays)
    assert cj.param_names == ("lam1", "lam2")
    assert cj.matrix.to_strings() == [["-lam1", "lam1", "-2*lam1"], ["-lam1", "0", "-2*lam1"]]


def test_free_shortcut_fails_on_convex_rays(convex_rays):
    # a flux outside the cone where the free Jacobian loses rank
    assert rank(flux_jacobian(convex_rays, [1, 2, "1/2", 1])) == 1
    cj = free_jacobian(convex_rays)
    assert cj.param_names == ("v1", "v2", "v3", "v4")


def test_flux_jacobian_checks_length(lacr_power_law):
    with pytest.raises(DimensionError):
        flux_jacobian(lacr_power_law, [1, 1])
    assert flux_jacobian(lacr_power_law, [2, 2, 2]).is_zero()


# -- local ACR ---------------------------------------------------------------

def test_local_acr_single_equation(lacr_power_law):
    cj = convex_jacobian(lacr_power_law)
    yes = local_acr_test(cj, 0, "X1")
    no = local_acr_test(cj, 1, "X2")
    assert yes.local_acr is LocalAcr.YES
    assert no.local_acr is LocalAcr.NO
    assert no.witness_cols == [0]
    assert no.witness_minor == "2*a1 + 2*a2"
    assert verify_acr_verdict(cj, yes)
    assert verify_acr_verdict(cj, no)
    assert not verify_acr_verdict(cj, dataclasses.replace(no, witness_minor="a1"))
    assert not verify_acr_verdict(cj, dataclasses.replace(no, witness_cols=[1]))


def test_local_acr_default_species_name(lacr_power_law):
    verdict = local_acr_test(convex_jacobian(lacr_power_law), 1)
    assert verdict.species == "x2"
    assert verdict.index == 1


def test_excluded_minors_range(lacr_power_law):
    cj = convex_jacobian(lacr_power_law)
    with pytest.raises(DimensionError):
        excluded_minors(cj, 2)
    assert [m.cols for m in excluded_minors(cj, 0)] == [(1,)]


def test_local_acr_convex_rays(convex_rays):
    cj = convex_jacobian(convex_rays)
    verdicts = [local_acr_test(cj, i, name) for i, name in enumerate(convex_rays.species)]
    assert [v.local_acr for v in verdicts] == [LocalAcr.NO, LocalAcr.YES, LocalAcr.NO]


def test_local_acr_idhkp_mass_action(idhkp_idh):
    cj = convex_jacobian(idhkp_idh)
    yes = [name for i, name in enumerate(idhkp_idh.species)
           if local_acr_test(cj, i, name).local_acr is LocalAcr.YES]
    assert yes == ["X4"]


def test_symbolic_conditions_idhkp(idhkp_idh_symbolic):
    cj = convex_jacobian(idhkp_idh_symbolic)
    assert cj.is_symbolic
    index = idhkp_idh_symbolic.species_index("X4")
    verdict = local_acr_test(cj, index, "X4")
    assert verdict.local_acr is LocalAcr.CONDITIONAL
    assert verdict.conditions == ["b33 - b34", "b33*b55 - b34*b56"]
    assert verify_acr_verdict(cj, verdict)


def test_symbolic_conditions_match_equalities_on_grid(idhkp_idh_symbolic):
    cj = convex_jacobian(idhkp_idh_symbolic)
    conditions = symbolic_acr_condition(cj, idhkp_idh_symbolic.species_index("X4"))
    grid = [1, 2, 3, 5, 7]
    rng = random.Random(3)
    for b33, b34, b55, b56 in product(grid, repeat=4):
        point = {name: rng.choice(grid) for name in cj.b_names}
        point.update(b33=b33, b34=b34, b55=b55, b56=b56)
        vanish = all(evaluate(c, point) == 0 for c in conditions)
        assert vanish == (b33 == b34 and b55 == b56)


def test_symbolic_other_species_are_no(idhkp_idh_symbolic):
    cj = convex_jacobian(idhkp_idh_symbolic)
    for i, name in enumerate(idhkp_idh_symbolic.species):
        if name != "X4":
            assert local_acr_test(cj, i, name).local_acr is LocalAcr.NO


def test_symbolic_conditions_single_equation():
    B = SymbolicMatrix(((Fraction(3), Fraction(2), Fraction(1)), ("b21", "b22", "b23")), 3)
    system = system_from_matrices(RationalMatrix.from_rows([[1, -2, 1]]), B)
    cj = convex_jacobian(system)
    assert [format_poly(c) for c in symbolic_acr_condition(cj, 0)] == ["b21 - b22", "b21 - b23"]
    assert local_acr_test(cj, 0).local_acr is LocalAcr.CONDITIONAL


def test_symbolic_free_minor_on_second_to_fourth_columns(idhkp_idh_symbolic):
    cj = free_jacobian(idhkp_idh_symbolic)
    ring = cj.matrix.ring
    value = poly_det(cj.matrix.submatrix(cols=[1, 2, 3]))
    expected = -ring.one
    for name in ("v1", "v3", "v4", "b21", "b33", "b44"):
        expected *= generator(ring, name)
    assert value == expected
    assert sign_profile(value) is SignProfile.ALL_NEGATIVE


def test_numeric_conditions_are_constants(lacr_power_law):
    cj = convex_jacobian(lacr_power_law)
    assert symbolic_acr_condition(cj, 0) == []
    assert [format_poly(c) for c in symbolic_acr_condition(cj, 1)] == ["1"]


def _random_invertible(rng: random.Random, size: int) -> RationalMatrix:
    while True:
        C = RationalMatrix.from_rows([[rng.randint(-3, 3) for _ in range(size)]
                                      for _ in range(size)])
        if rank(C) == size:
            return C


@pytest.mark.parametrize("name", ["shinar-feinberg", "idhkp-idh", "dimerization",
                                  "rational-exponents"])
@pytest.mark.parametrize("seed", range(5))
def test_verdicts_invariant_under_row_reselection(load_example, name, seed):
    system = load_example(name).system
    C = _random_invertible(random.Random(seed), system.s)
    mixed = system_from_matrices(C @ system.N, system.B, system.W, species=system.species)
    gamma_rows = RationalMatrix.from_rows(list(reversed(system.gamma.data)), ncols=system.r)
    reselected = system_from_matrices(gamma_rows, system.B, system.W, species=system.species)

    def verdicts(sys_):
        cj = convex_jacobian(sys_)
        return [local_acr_test(cj, i).local_acr for i in range(sys_.n)]

    expected = verdicts(system)
    assert verdicts(mixed) == expected
    assert verdicts(reselected) == expected


# -- non-degeneracy ----------------------------------------------------------

def test_nondegeneracy_fails_with_witness(lacr_power_law):
    cj = convex_jacobian(lacr_power_law)
    rays = extreme_rays(lacr_power_law.N)
    verdict = nondegeneracy_test(lacr_power_law, cj, rays, samples=8, seed=0)
    assert verdict.status is NondegeneracyStatus.FAILS
    assert verdict.stage == "sample"
    assert verdict.witness_lambda == [1, 1]
    assert verdict.witness_vector == ["2", "2", "2"]
    assert verdict.samples_tried == 1
    assert verify_nondegeneracy_witness(lacr_power_law, verdict)


def test_nondegeneracy_certified_on_rays(convex_rays):
    cj = convex_jacobian(convex_rays)
    verdict = nondegeneracy_test(convex_rays, cj, extreme_rays(convex_rays.N))
    assert verdict.status is NondegeneracyStatus.CERTIFIED
    assert verdict.stage == "rays"
    assert verdict.witness_cols == [0, 1]
    assert verdict.witness_minor == "lam1**2"
    assert verify_nondegeneracy_witness(convex_rays, verdict)
    assert not verify_nondegeneracy_witness(
        convex_rays, dataclasses.replace(verdict, witness_minor="-lam1**2"))


@pytest.mark.parametrize("fixture, cols, minor", [
    ("shinar_feinberg", [0], "-v1"),
    ("divisibility_control", [0], "v1"),
    ("dimerization", [0], "-4*v1"),
    ("idhkp_idh", [0, 2, 3], "-v1*v3*v4"),
])
def test_nondegeneracy_certified_by_free_minor(request, fixture, cols, minor):
    system = request.getfixturevalue(fixture)
    verdict = nondegeneracy_test(system, convex_jacobian(system), extreme_rays(system.N))
    assert verdict.status is NondegeneracyStatus.CERTIFIED
    assert verdict.stage == "free"
    assert verdict.witness_cols == cols
    assert verdict.witness_minor == minor
    assert verify_nondegeneracy_witness(system, verdict)


def test_nondegeneracy_symbolic_free_minor(idhkp_idh_symbolic):
    system = idhkp_idh_symbolic
    verdict = nondegeneracy_test(system, convex_jacobian(system), extreme_rays(system.N))
    assert verdict.status is NondegeneracyStatus.CERTIFIED
    assert verdict.witness_cols == [0, 2, 3]
    assert "v1*v3*v4" in verdict.witness_minor
    assert verify_nondegeneracy_witness(system, verdict)


def test_nondegeneracy_empty_cone():
    system = system_from_matrices(RationalMatrix.from_rows([[1, 1]]),
                                  RationalMatrix.from_rows([[1, 0], [0, 1]]))
    verdict = nondegeneracy_test(system, convex_jacobian(system), extreme_rays(system.N))
    assert verdict.status is NondegeneracyStatus.EMPTY_CONE
    assert verify_nondegeneracy_witness(system, verdict)


def test_nondegeneracy_is_reproducible_for_a_seed(lacr_power_law):
    cj = convex_jacobian(lacr_power_law)
    rays = extreme_rays(lacr_power_law.N)
    first = nondegeneracy_test(lacr_power_law, cj, rays, samples=16, seed=42)
    second = nondegeneracy_test(lacr_power_law, cj, rays, samples=16, seed=42)
    assert first == second


# -- divisibility ------------------------------------------------------------

def test_divisibility_convex_rays(convex_rays):
    cj = convex_jacobian(convex_rays)
    p = divisibility_polynomial(convex_rays, cj)
    assert format_poly(p) == "-2*a2**2*h2*h3"
    assert [divisibility_status(p, i) for i in range(3)] == [
        DivisibilityStatus.NOT_DIVISIBLE, DivisibilityStatus.DIVISIBLE,
        DivisibilityStatus.DIVISIBLE,
    ]


def test_divisibility_is_only_necessary(divisibility_control):
    cj = convex_jacobian(divisibility_control)
    assert cj.matrix.to_strings() == [["a1", "a1"]]
    assert format_poly(divisibility_polynomial(divisibility_control, cj)) == "a1*h1"
    assert divisibility_test(divisibility_control, cj, 0)
    assert not divisibility_test(divisibility_control, cj, 1)
    assert local_acr_test(cj, 0).local_acr is LocalAcr.NO


def test_divisibility_shinar_feinberg(shinar_feinberg):
    cj = convex_jacobian(shinar_feinberg)
    assert cj.matrix.to_strings() == [["-a1", "0"]]
    assert format_poly(divisibility_polynomial(shinar_feinberg, cj)) == "-a1*h1"


def test_divisibility_needs_w(lacr_power_law):
    cj = convex_jacobian(lacr_power_law)
    with pytest.raises(BuildError):
        divisibility_polynomial(lacr_power_law, cj)
    with pytest.raises(DimensionError):
        divisibility_test(lacr_power_law, cj, 5)


def test_divisibility_zero_polynomial_not_informative():
    assert divisibility_status(poly_ring(["h1"]).zero, 0) is DivisibilityStatus.NOT_INFORMATIVE


# -- full analysis -----------------------------------------------------------

def test_analyze_shinar_feinberg(shinar_feinberg):
    report = analyze(shinar_feinberg)
    assert report.local_acr_species() == ["X1"]
    assert report.nondegeneracy is NondegeneracyStatus.CERTIFIED
    x1 = report.verdict("X1")
    assert x1.divisibility is DivisibilityStatus.DIVISIBLE
    assert x1.zero_sensitivity
    assert report.verdict("X2").divisibility is DivisibilityStatus.NOT_DIVISIBLE
    assert report.divisibility_polynomial == "-a1*h1"
    assert report.kernel_basis == [["1", "1"]]
    assert report.rays == [[1, 1]]
    assert (report.n, report.r, report.s, report.d) == (2, 2, 1, 1)
    assert any("connected" in note for note in report.notes)
    with pytest.raises(KeyError):
        report.verdict("X9")


def test_analyze_without_w_marks_divisibility_unavailable(lacr_power_law):
    report = analyze(lacr_power_law)
    assert report.nondegeneracy is NondegeneracyStatus.FAILS
    assert {sp.divisibility for sp in report.species} == {DivisibilityStatus.UNAVAILABLE}
    assert report.divisibility_polynomial is None
    assert any("not certified" in note for note in report.notes)


def test_analyze_empty_cone_skips_everything():
    system = system_from_matrices(RationalMatrix.from_rows([[1, 1]]),
                                  RationalMatrix.from_rows([[1, 0], [0, 1]]))
    report = analyze(system)
    assert report.nondegeneracy is NondegeneracyStatus.EMPTY_CONE
    assert {sp.local_acr for sp in report.species} == {LocalAcr.NOT_EVALUATED}
    assert {sp.divisibility for sp in report.species} == {DivisibilityStatus.SKIPPED}


def test_analyze_full_rank_system_is_trivially_acr():
    system = system_from_matrices(RationalMatrix.from_rows([[1, -1, 0], [0, 1, -1]]),
                                  RationalMatrix.from_rows([[1, 0, 0], [0, 1, 0]]))
    report = analyze(system)
    assert report.d == 0
    assert report.local_acr_species() == ["X1", "X2"]
    assert {sp.divisibility for sp in report.species} == {DivisibilityStatus.SKIPPED}
    assert any(note.startswith("s = n") for note in report.notes)
    with pytest.raises(BuildError):
        divisibility_polynomial(system, convex_jacobian(system))


def test_analyze_symbolic(idhkp_idh_symbolic):
    report = analyze(idhkp_idh_symbolic)
    assert report.symbolic
    x4 = report.verdict("X4")
    assert x4.local_acr is LocalAcr.CONDITIONAL
    assert x4.conditions == ["b33 - b34", "b33*b55 - b34*b56"]
    assert not x4.zero_sensitivity
    assert any("positive parameters" in note for note in report.notes)


def test_analyze_uses_configured_seed(lacr_power_law):
    report = analyze(lacr_power_law, samples=4, seed=11)
    assert report.seed == 11
    assert report.samples == 4
    assert report.nondegeneracy_evidence.seed == 11


def test_report_json_round_trip(convex_rays):
    report = analyze(convex_rays)
    text = report.dumps()
    data = json.loads(text)
    assert data["schema"] == 1
    assert data["nondegeneracy"] == "CERTIFIED"
    assert [sp["local_acr"] for sp in data["species"]] == ["NO", "YES", "NO"]
    assert list(data) == sorted(data)
    assert AnalysisReport.from_json(text) == report


def test_pretty_print(convex_rays):
    text = analyze(convex_rays).pretty_print()
    assert "non-degeneracy: CERTIFIED" in text
    assert "local ACR YES" in text
    assert "\033[" not in text
    assert "\033[32mYES" in analyze(convex_rays).pretty_print(color=True)
