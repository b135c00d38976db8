"""Non-positive circuit weight problem on G(λP ⊕ λ⁻¹I ⊕ C) via max-plus algebra."""

from .graph import certificate, find_positive_circuit, from_matrix, has_positive_circuit
from .maxplus import (
    DimensionError,
    MaxPlusError,
    PositiveCircuitError,
    TopEntryError,
    identity,
    kleene_star,
    mat_oplus,
    mat_otimes,
    mat_power,
    mcm,
    zeros,
)
from .oracle import bisection_bounds, build_lp, feasible_at, write_lp_file
from .solver import (
    LambdaInterval,
    ProblemInstance,
    SolveReport,
    algorithm1,
    algorithm2,
    laurent_expand,
    s_iterate,
    solve,
    solve_i_eps,
    solve_p_eps,
)

__version__ = "0.1.0"
