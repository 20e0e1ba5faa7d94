"""Equilibria of the charged trigonometric Calogero-Moser system and the real
2D locus configurations they produce."""

from .arrangement import (
    Arrangement,
    ChargedEnsemble,
    MultiplicityList,
    charges_from_multiplicities,
    cm_force,
    cm_forces,
    cm_potential,
    is_equilibrium,
    normal_vector,
    schrodinger_potential,
    spanning_vector,
)
from .exceptions import (
    CollisionError,
    LocusConfError,
    NonConvergenceError,
    OrderError,
    SchemaError,
    SingularityError,
)
from .locus import (
    LocusReport,
    is_coarsely_coxeter,
    is_coarsely_symmetric,
    is_first_locus,
    is_locus_configuration,
    is_reflection_invariant,
    locus_residual,
    reflection_image,
)
from .solver import (
    SolveResult,
    SolverConfig,
    canonical_rotation,
    reduced_gradient,
    reduced_hessian,
    solve_equilibrium,
)

__version__ = "0.1.0"
