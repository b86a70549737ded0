"""Ground states of the nonlinear Schroedinger equation on the half-line with a Robin point interaction."""

from .boundstate import BoundState, bound_state, energy, mass, mass_derivative
from .closedform import UniversalConstants, compute_constants
from .errors import BranchInvalid, ConvergenceError, DomainError, NoBoundState, OutOfRange
from .groundstate import EnergyLevel, GroundStateReport, LevelKind, decide, ground_energy_level
from .thresholds import BranchSelector, count_bound_states, invert_mass, least_energy_bound_state

__all__ = [
    "BoundState", "BranchInvalid", "BranchSelector", "ConvergenceError", "DomainError", "EnergyLevel",
    "GroundStateReport", "LevelKind", "NoBoundState", "OutOfRange", "UniversalConstants",
    "bound_state", "compute_constants", "count_bound_states", "decide", "energy",
    "ground_energy_level", "invert_mass", "least_energy_bound_state", "mass", "mass_derivative",
]
