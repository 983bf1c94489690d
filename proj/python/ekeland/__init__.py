"""Constructive Ekeland variational principle.

Descent solver on finite and normed metric spaces, machine-checkable
certificates for every conclusion of the generalized principle, and a
brute-force oracle for finite spaces. All heavy lifting lives in the
compiled ``_core`` extension; this package re-exports its surface.
"""

from ._core import (  # noqa: F401
    CertItem,
    CertMode,
    CertOptions,
    CertOverall,
    CertStatus,
    Certificate,
    EvpError,
    Functional,
    IterationTrace,
    LocalBallParams,
    MetricSpace,
    NormKind,
    Point,
    ProblemFormatError,
    RejectedStartError,
    SamplerKind,
    SolverConfig,
    Termination,
    abs_sum,
    boxed_quadratic,
    constant,
    custom_functional,
    ekeland_set,
    exact_inf,
    gateaux_fd,
    make_certificate,
    membership_S,
    quadratic,
    quartic,
    rosenbrock,
    run,
    run_problem_file,
    run_problem_json,
    run_second_order,
    second_variation_fd,
    select_next,
    table,
    taylor_remainder,
    verify_against_oracle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
