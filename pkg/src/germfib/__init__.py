"""Tube and sphere fibrations of real polynomial map germs.

The package computes Milnor sets, discriminants and condition reports for a
germ ``G: (R^m, 0) -> (R^p, 0)``, and integrates Milnor vector fields that
carry tube fibres onto sphere fibres.
"""

__version__ = "0.1.0"

from .config import Config, load_config  # noqa: E402
from .germ import (GermError, MapGerm, germ_from_mixed, jacobian, load_germ, norm_squared,  # noqa: E402
                   omega_fields, parse_germ_text, singular_set_system)
from .homogeneity import (PolarWeights, RadialWeights, detect_polar_weights,  # noqa: E402
                          detect_radial_weights, euler_field, verify_polar_action,
                          verify_radial_action)
from .parse import ParseError, parse_mixed, parse_polynomial  # noqa: E402
from .poly import MixedFunction, Polynomial, PolyVector, realify  # noqa: E402
from .report import ConditionReport, Implication  # noqa: E402
from .varieties import (WitnessSet, cluster_components, milnor_set_system, newton_project,  # noqa: E402
                        psi_milnor_set_system, witness_sample)
from .flow import (FiberSample, FieldEval, Trajectory, blow_away, equivalence_evidence,  # noqa: E402
                   field_eval, sample_fiber, tangent_project)
from .conditions import (DiscriminantSample, check_condition_main,  # noqa: E402
                         check_milnor_image_coverage, check_mvf_exists, check_niceness,
                         check_radial_discriminant, check_rho_regularity_psi, sample_discriminant)
from .analysis import AnalysisBundle, InvariantViolation, analyze  # noqa: E402
from .catalog import catalog_germ, catalog_names  # noqa: E402

__all__ = [
    "AnalysisBundle", "ConditionReport", "Config", "DiscriminantSample", "FiberSample", "FieldEval",
    "GermError", "Implication", "InvariantViolation", "MapGerm", "MixedFunction", "ParseError",
    "PolarWeights", "PolyVector", "Polynomial", "RadialWeights", "Trajectory", "WitnessSet",
    "analyze", "blow_away", "catalog_germ", "catalog_names", "check_condition_main",
    "check_milnor_image_coverage", "check_mvf_exists", "check_niceness", "check_radial_discriminant",
    "check_rho_regularity_psi", "cluster_components", "detect_polar_weights", "detect_radial_weights",
    "equivalence_evidence", "euler_field", "field_eval", "germ_from_mixed", "jacobian", "load_config",
    "load_germ", "milnor_set_system", "newton_project", "norm_squared", "omega_fields",
    "parse_germ_text", "parse_mixed", "parse_polynomial", "psi_milnor_set_system", "realify",
    "sample_discriminant", "sample_fiber", "singular_set_system", "tangent_project",
    "verify_polar_action", "verify_radial_action", "witness_sample",
]
