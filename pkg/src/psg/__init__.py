"""Projected subgradient solvers with norm-adaptive step sizes and certificates.

The package solves constrained nonsmooth convex problems with the projected
subgradient iteration x_{s+1} = project(x_s - eta_s g_s) and provides:

* four step-size rules (:mod:`psg.stepsize`), including a norm-adaptive
  family that needs no Lipschitz constant and keeps the optimal 1/sqrt(t)
  ergodic rate even for objectives with unbounded subgradients;
* streaming weighted-iterate averaging and best-iterate tracking
  (:mod:`psg.averaging`);
* evaluators for every supported convergence bound and their use as
  runtime certificates checked along the run (:mod:`psg.bounds`);
* ball/box projections (:mod:`psg.projection`), bundled test problems and a
  synthetic Lasso generator (:mod:`psg.problems`), and a batch experiment
  CLI (:mod:`psg.cli`).
"""

from .averaging import BestIterate, StreamingAverage, WeightRule, weight
from .bounds import (
    check_certificate,
    classic_bound,
    constant_bound,
    family_bound,
    nesterov_bound,
    weak_ergodic_bound,
)
from .core import (
    ABS_TOL,
    REL_TOL,
    EmptySubdifferentialError,
    InvalidParameterError,
    IterationRecord,
    NumericError,
    ProblemInstance,
    RunReport,
    ShapeError,
    StopReason,
    SubgradientResult,
    ZeroSubgradientError,
    subgradient_inequality_check,
    with_reference_optimum,
)
from .problems import (
    LassoInstance,
    generate_lasso,
    load_lasso_csv,
    make_abs_problem,
    make_lasso,
    make_sqrt_example,
    reference_optimum_value,
    save_lasso_csv,
)
from .projection import Ball, Box, feasibility_residual, project
from .solver import SolverConfig, psg_step, run
from .stepsize import (
    ClassicPolicy,
    ConstantPolicy,
    FamilyPolicy,
    NesterovPolicy,
    StepSizePolicy,
    classic_step,
    constant_step,
    family_step,
    family_update_G,
    nesterov_step,
)

__version__ = "0.1.0"

__all__ = [
    "ABS_TOL",
    "REL_TOL",
    "Ball",
    "BestIterate",
    "Box",
    "ClassicPolicy",
    "ConstantPolicy",
    "EmptySubdifferentialError",
    "FamilyPolicy",
    "InvalidParameterError",
    "IterationRecord",
    "LassoInstance",
    "NesterovPolicy",
    "NumericError",
    "ProblemInstance",
    "RunReport",
    "ShapeError",
    "SolverConfig",
    "StepSizePolicy",
    "StopReason",
    "StreamingAverage",
    "SubgradientResult",
    "WeightRule",
    "ZeroSubgradientError",
    "check_certificate",
    "classic_bound",
    "classic_step",
    "constant_bound",
    "constant_step",
    "family_bound",
    "family_step",
    "family_update_G",
    "feasibility_residual",
    "generate_lasso",
    "load_lasso_csv",
    "make_abs_problem",
    "make_lasso",
    "make_sqrt_example",
    "nesterov_bound",
    "nesterov_step",
    "project",
    "psg_step",
    "reference_optimum_value",
    "run",
    "save_lasso_csv",
    "subgradient_inequality_check",
    "weak_ergodic_bound",
    "weight",
    "with_reference_optimum",
]
