"""Exception types raised by locusconf."""


class LocusConfError(Exception):
    """Base class for all package errors."""


class CollisionError(LocusConfError, ValueError):
    """Two particles (lines) coincide to within the collision threshold."""


class SingularityError(CollisionError):
    """A point lies on one of the lines, where the potential u(x) blows up."""


class OrderError(LocusConfError, ValueError):
    """Requested locus equation order exceeds the line multiplicity."""


class SchemaError(LocusConfError, ValueError):
    """Malformed arrangement or multiplicity input."""


class NonConvergenceError(LocusConfError, RuntimeError):
    """The equilibrium solver stopped before reaching its tolerance.

    The partial state is kept on the exception so callers can inspect it.
    """

    def __init__(self, message, thetas=None, gradient_inf_norm=None, iterations=None):
        super().__init__(message)
        self.thetas = thetas
        self.gradient_inf_norm = gradient_inf_norm
        self.iterations = iterations
