"""Exact symbolic engine for graded algebras that commute up to a factor,
with machine-checked Carrollian structures (degenerate metrics, kernel
distributions, stationarity, compatible connections) on Lie-Rinehart pairs
over them."""

__version__ = "0.1.0"

from .algebra import AlgebraElement, AlgebraPresentation, GeneratorSpec, rho_commutator
from .carroll import (CarrollStructure, FlowPolynomial, carroll_connection_check,
                      carroll_distribution, check_involutive, check_stationary,
                      flow, quotient_metric, verify_carroll)
from .coefficients import CoefficientRing, GaussianRational, LaurentCoefficient
from .derivation import (DerivationCombo, RhoDerivation, apply_derivation,
                         der_commutator, verify_derivation)
from .geometry import (Connection, Metric, TensorValue, check_tensoriality,
                       covariant_derivative_metric, curvature, levi_civita,
                       torsion)
from .grading import CommutationFactor, Degree, GradeGroup, check_commutation_axioms
from .report import CheckResult, VerificationReport
from .rinehart import (LieRinehartPair, Section, check_morphism, is_isotropic,
                       is_killing, lie_derivative_metric, verify_pair)

__all__ = [
    "AlgebraElement", "AlgebraPresentation", "CarrollStructure", "CheckResult",
    "CoefficientRing", "CommutationFactor", "Connection", "Degree",
    "DerivationCombo", "FlowPolynomial", "GaussianRational", "GeneratorSpec",
    "GradeGroup", "LaurentCoefficient", "LieRinehartPair", "Metric",
    "RhoDerivation", "Section", "TensorValue", "VerificationReport",
    "apply_derivation", "carroll_connection_check", "carroll_distribution",
    "check_commutation_axioms", "check_involutive", "check_morphism",
    "check_stationary", "check_tensoriality", "covariant_derivative_metric",
    "curvature", "der_commutator", "flow", "is_isotropic", "is_killing",
    "levi_civita", "lie_derivative_metric", "quotient_metric",
    "rho_commutator", "torsion", "verify_carroll", "verify_derivation",
    "verify_pair",
]
