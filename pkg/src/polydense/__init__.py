"""Polynomial density in weighted L² spaces: Laplace-transform hypotheses,
orthonormal polynomial bases and projection diagnostics."""
from .conditions import ConditionReport, certify, polynomial_tail_check, tail_decay_check
from .errors import (
    DegeneracyError,
    DivergentIntegral,
    DomainError,
    InconclusiveIntegral,
    InconsistencyError,
    InfiniteMassError,
    IntegralNotConverged,
    TabulatedParseError,
)
from .laplace import (
    UNBOUNDED,
    UNDEFINED,
    CheckResult,
    LaplaceReport,
    SignedFunction,
    check_weighted_monomial,
    estimate_delta,
    laplace_transform,
    moment,
    monomial_laplace,
    signed_laplace,
)
from .measure import (
    BaseMeasure,
    WeightDensity,
    double_exponential,
    equal_weights,
    eval_density,
    gaussian,
    load_tabulated_csv,
    lognormal,
    tabulated,
    total_mass,
    uniform,
)
from .orthopoly import OrthonormalBasis, build_basis, eval_basis, monomial_coefficients, orthogonality_audit
from .projection import (
    TEST_FUNCTIONS,
    ProjectionResult,
    completeness_curve,
    counterexample_audit,
    inner_product,
    project,
)
from .quadrature import IntegralOutcome, QuadraturePlan, integrate

__version__ = "0.1.0"
