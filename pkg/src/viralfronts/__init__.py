"""Solver and analysis toolkit for a two-front moving-boundary viral
propagation model: closed-form thresholds, coupled principal eigenvalues,
steady states, front-fixing time integration, and spreading/vanishing
classification with a certified threshold search."""

from .classify import (
    Certificate,
    Classification,
    ClassifyTolerances,
    Probe,
    ThresholdBracket,
    classify_online,
    optimize_certificate,
    sweep,
    threshold_search,
    vanishing_certificate,
)
from .core_model import (
    DerivedConstants,
    EquilibriumTriple,
    InitialData,
    ModelParams,
    baseline_equilibrium,
    basic_reproduction_number,
    derived_constants,
    equilibrium_full,
    f1,
    f2,
    f3,
    ode_baseline,
    validate_initial_data,
    w_hat,
)
from .errors import (
    BracketError,
    CertificateNotApplicable,
    FrontCollapse,
    InvalidInitialData,
    NoPositiveRoot,
    NonConvergence,
    NumericalError,
    ThresholdViolated,
    ValidationError,
)
from .fb_solver import (
    RunOutcome,
    SimState,
    StepperConfig,
    TimeSeries,
    TransformCoeffs,
    initialize,
    run,
    step,
)
from .spectral import (
    EigenProblem,
    EigenResult,
    ThresholdSet,
    eigen_for_model,
    eigen_oracle,
    phi_tilde,
    principal_eigenvalue,
    thresholds,
)
from .steady_states import (
    BvpSolution,
    NoPositiveSolution,
    discrete_residual,
    solve_bvp_with_boundary_value,
    solve_dirichlet_bvp,
)

__version__ = "0.1.0"
