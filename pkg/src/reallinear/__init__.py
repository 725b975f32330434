"""Least-squares tools for complex operators that mix linear and antilinear
parts."""

from .builtins import (
    antilinear,
    conjugation,
    identity,
    imag_part,
    linear,
    loraks_system,
    matrix_blackbox,
    phase_constrained_system,
    real_part,
    scaled_identity,
    zero,
)
from .counter import MultCounter
from .lift import (
    LiftedMatrix,
    LiftedOperator,
    NaiveLiftedOp,
    build_loraks_lifted,
    lift_operator,
    lift_vector,
    naive_funcall_lift_adjoint,
    naive_funcall_lift_apply,
    unlift_vector,
)
from .operators import (
    BlackboxOp,
    DimensionError,
    ElementwiseOp,
    MatrixOp,
    NonFiniteError,
    NotRealLinearError,
    RealLinearOp,
    add,
    adjoint,
    adjoint_operator,
    apply,
    compose,
    materialize,
    real_inner,
    scale,
    split_linear_antilinear,
    stack,
)
from .solvers import (
    NumericalBreakdown,
    SolverConfig,
    SolverTrace,
    cg_complex,
    cg_real,
    cost,
    estimate_step_size,
    gram_norm_estimate,
    landweber_complex,
    landweber_real,
    lsqr_complex,
    lsqr_real,
)

__version__ = "0.1.0"

__all__ = [
    "add",
    "adjoint",
    "adjoint_operator",
    "antilinear",
    "apply",
    "BlackboxOp",
    "build_loraks_lifted",
    "cg_complex",
    "cg_real",
    "compose",
    "conjugation",
    "cost",
    "DimensionError",
    "ElementwiseOp",
    "estimate_step_size",
    "gram_norm_estimate",
    "identity",
    "imag_part",
    "landweber_complex",
    "landweber_real",
    "lift_operator",
    "lift_vector",
    "LiftedMatrix",
    "LiftedOperator",
    "linear",
    "loraks_system",
    "lsqr_complex",
    "lsqr_real",
    "materialize",
    "matrix_blackbox",
    "MatrixOp",
    "MultCounter",
    "naive_funcall_lift_adjoint",
    "naive_funcall_lift_apply",
    "NaiveLiftedOp",
    "NonFiniteError",
    "NotRealLinearError",
    "NumericalBreakdown",
    "phase_constrained_system",
    "real_inner",
    "real_part",
    "RealLinearOp",
    "scale",
    "scaled_identity",
    "SolverConfig",
    "SolverTrace",
    "split_linear_antilinear",
    "stack",
    "unlift_vector",
    "zero",
]
