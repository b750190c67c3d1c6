"""Exception types raised by the stablefront engine.

Every error that a caller can meaningfully catch derives from
:class:`StableFrontError`.  Validation failures (a computed quantity
violating one of the library's own contracts) use
:class:`ValidationError` so the command line driver can map them to a
distinct exit code.
"""


class StableFrontError(Exception):
    """Base class for all stablefront errors."""


class ValidationError(StableFrontError):
    """A self-check of the engine failed (contract violation)."""


# ---------------------------------------------------------------- fields

class EnergyBelowPotential(StableFrontError):
    """Energy level c does not exceed max V, so 1/sqrt(2(c - V)) blows up."""


class NonPositiveSpeed(StableFrontError):
    """A speed field was sampled at a non-positive value."""


# ---------------------------------------------------------------- lattice

class WindowTooSmall(StableFrontError):
    """Lattice window has fewer than two nodes along an axis."""


class CapacityExceeded(StableFrontError):
    """Requested window exceeds the configured node budget."""


# ---------------------------------------------------------------- shortest path

class NodeOutOfWindow(StableFrontError):
    """Query point snaps to a node outside the graph window."""


class Unreachable(StableFrontError):
    """No path between the requested nodes (should not happen on full stencils)."""


# ---------------------------------------------------------------- norms

class NonPrimitiveDirection(StableFrontError):
    """Direction vector must be a primitive integer vector (gcd 1, nonzero)."""


class SubadditivityViolation(ValidationError):
    """Scale-doubling sequence failed its monotonicity contract."""


# ---------------------------------------------------------------- front geometry

class DegenerateTable(StableFrontError):
    """Norm table spans fewer than three non-collinear hull points."""


class OriginNotInterior(StableFrontError):
    """Polar dual requested for a polygon that does not contain the origin."""


class HistoryMismatch(StableFrontError):
    """Facet report fed fronts computed from different fields."""


# ---------------------------------------------------------------- Hamiltonian

class TolInfeasible(StableFrontError):
    """Energy bisection bracket collapsed below discretization noise."""


class EnergyBracketFailure(StableFrontError):
    """Could not bracket the unit level while doubling the energy."""


class IndistinguishableLevels(StableFrontError):
    """Convexity probe endpoints agree within combined tolerance."""


class InfmaxDivergence(StableFrontError):
    """Subgradient descent increased its value for too many consecutive steps."""


# ---------------------------------------------------------------- geodesics

class ParamMismatch(StableFrontError):
    """Paths being compared were produced under different fields or rigs."""


class InvalidSplice(StableFrontError):
    """Crossing-exchange surgery was asked to splice at a non-shared node."""


class ZeroDirection(StableFrontError):
    """Operation requires a nonzero integer direction."""
