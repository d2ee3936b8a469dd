"""Exception types shared across the package."""


class DomainError(ValueError):
    """A point lies outside the geometric domain it was evaluated on."""


class SingularityError(ValueError):
    """Evaluation requested too close to a vortex singularity."""


class ConfigurationError(ValueError):
    """A vortex configuration violates a structural precondition."""


class ConvergenceError(RuntimeError):
    """An iterative solve failed to converge within its budget."""
