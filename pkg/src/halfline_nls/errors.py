"""Exception types raised by the library."""


class DomainError(ValueError):
    """Parameters outside the admissible (p, alpha, omega, mu) domain."""


class NoBoundState(DomainError):
    """No positive bound state exists, e.g. omega <= alpha**2 or an empty mass set."""


class OutOfRange(DomainError):
    """Requested mass is not in the image of the selected branch of the mass map."""


class BranchInvalid(DomainError):
    """Branch selector inconsistent with the monotonicity regime of (p, alpha)."""


class ConvergenceError(RuntimeError):
    """A bracketed solve could not locate a sign change or did not converge."""
