"""
acr - local Absolute Concentration Robustness and zero sensitivity for
power-law reaction-network systems, decided by exact linear algebra over
the kernel of the coefficient matrix.
"""

from .analysis import (
    AcrVerdict,
    AnalysisReport,
    ConvexJacobian,
    DivisibilityStatus,
    LocalAcr,
    NondegeneracyStatus,
    NondegeneracyVerdict,
    SpeciesReport,
    analyze,
    convex_jacobian,
    divisibility_polynomial,
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
from .catalog import NetworkCatalog, NetworkEntry, catalog, get_network, list_networks
from .cone import ConeRays, extreme_rays
from .config import (
    ConfigManager,
    config_manager,
    get_analysis_config,
    get_config,
    get_environment_config,
    get_tolerance_config,
)
from .errors import (
    AcrError,
    BuildError,
    DimensionError,
    DomainError,
    OracleFailure,
    ParseError,
    SingularPointError,
    UnknownVariableError,
)
from .exact import (
    Minor,
    PolyMatrix,
    RationalMatrix,
    SignProfile,
    canonical_vector,
    divisible_by,
    kernel_basis,
    left_kernel_basis,
    minors,
    poly_det,
    poly_ring,
    rank,
    select_independent_rows,
    sign_profile,
)
from .network import (
    GeneralizedPolynomialSystem,
    Kinetics,
    Network,
    PolynomializedSystem,
    PowerLawSystem,
    Reaction,
    SymbolicMatrix,
    build_system,
    phi,
    phi_inverse,
    polynomialize,
    system_from_matrices,
)
from .parser import (
    ParsedDocument,
    PointSpec,
    format_network,
    load_document,
    load_file,
    parse_kinetics,
    parse_network,
    parse_points,
    parse_symbolic_kinetics,
)
from .sensitivity import (
    Degeneracy,
    DegeneracyClassification,
    PointReport,
    SensitivityMethod,
    SensitivityVector,
    SteadyStatePoint,
    admit_point,
    analyze_point,
    canonical_sensitivities,
    classify_degeneracy,
    continuation_oracle,
    find_steady_state,
    jacobian_at,
    numeric_rank,
    sample_steady_states,
    sensitivity_canonical,
    sensitivity_general,
    sensitivity_vanishes,
    state_perturbation_direction,
    zero_sensitivity_test,
)

__version__ = "0.1.1"

__all__ = [
    # analysis
    "AcrVerdict", "AnalysisReport", "ConvexJacobian",
    "DivisibilityStatus", "LocalAcr", "NondegeneracyStatus", "NondegeneracyVerdict",
    "SpeciesReport", "analyze", "convex_jacobian", "divisibility_polynomial",
    "divisibility_test", "excluded_minors", "flux_jacobian", "free_jacobian",
    "local_acr_test", "nondegeneracy_test", "ray_jacobian", "symbolic_acr_condition",
    "verify_acr_verdict", "verify_nondegeneracy_witness",
    # catalog
    "NetworkCatalog", "NetworkEntry", "catalog", "get_network", "list_networks",
    # cone
    "ConeRays", "extreme_rays",
    # config
    "ConfigManager", "config_manager", "get_analysis_config", "get_config",
    "get_environment_config", "get_tolerance_config",
    # errors
    "AcrError", "BuildError", "DimensionError", "DomainError", "OracleFailure",
    "ParseError", "SingularPointError", "UnknownVariableError",
    # exact
    "Minor", "PolyMatrix", "RationalMatrix", "SignProfile", "canonical_vector",
    "divisible_by", "kernel_basis", "left_kernel_basis", "minors", "poly_det",
    "poly_ring", "rank", "select_independent_rows", "sign_profile",
    # network
    "GeneralizedPolynomialSystem", "Kinetics", "Network", "PolynomializedSystem",
    "PowerLawSystem", "Reaction", "SymbolicMatrix", "build_system", "phi",
    "phi_inverse", "polynomialize", "system_from_matrices",
    # parser
    "ParsedDocument", "PointSpec", "format_network", "load_document", "load_file",
    "parse_kinetics", "parse_network", "parse_points", "parse_symbolic_kinetics",
    # sensitivity
    "Degeneracy", "DegeneracyClassification", "PointReport", "SensitivityMethod",
    "SensitivityVector", "SteadyStatePoint", "admit_point", "analyze_point",
    "canonical_sensitivities", "classify_degeneracy", "continuation_oracle",
    "find_steady_state", "jacobian_at", "numeric_rank", "sample_steady_states",
    "sensitivity_canonical", "sensitivity_general", "sensitivity_vanishes",
    "state_perturbation_direction", "zero_sensitivity_test",
]
