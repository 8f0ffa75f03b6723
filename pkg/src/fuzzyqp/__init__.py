"""Fuzzy efficient solutions of non-convex multi-objective quadratic programs."""
from .crisp import AspirationInterval, CrispOptimum, aspiration_interval, crisp_table, solve_crisp
from .errors import (
    FuzzyQpError,
    InfeasibleError,
    InstanceFormatError,
    InvalidInstanceError,
    LevelSetEmptyError,
    TooLargeError,
    UnboundedError,
)
from .instance import (
    CrispQp,
    FuzzyBounds,
    FuzzyMoqpInstance,
    FuzzyRow,
    QuadraticObjective,
    crisp_variants,
    dumps_instance,
    example_instance,
    load_instance,
    parse_instance,
    validate,
)
from .oracle import GridOracleConfig
from .polytope import Polyhedron, Vertex, contains, enumerate_vertices
from .solver import (
    MembershipSystem,
    Phase1Result,
    Phase2Result,
    build_system,
    check_fuzzy_efficiency,
    check_pareto,
    mu_D,
    solve_phase1,
    solve_phase2,
)

__version__ = "0.1.0"
