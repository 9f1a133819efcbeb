"""Exception hierarchy for Janus computations."""


class JanusError(Exception):
    """Base class for every computational error raised by the package."""


class InvalidParameter(JanusError, ValueError):
    """A state or control parameter is outside its domain."""


class DegenerateState(JanusError):
    """The superposition cancels to (numerically) the zero vector."""


class NoConvergence(JanusError):
    """A series did not reach its tail threshold within the term cap."""


class OrderTooLarge(JanusError):
    """Requested moment order exceeds the configured cap."""


class VacuumState(JanusError):
    """Mean photon number is too small to normalise a coherence function."""


class CutoffTooSmall(JanusError):
    """The Fock truncation leaves too much probability in the boundary band."""


class SingularSigma(JanusError):
    """A mean covariance matrix is singular."""


class GridTooCoarse(JanusError):
    """A phase-space grid does not resolve the normalisation integral."""


class StepTooSmall(JanusError):
    """Finite-difference fidelity deficit is lost in roundoff."""


class BranchError(JanusError):
    """An expected real quantity carries a large imaginary residue."""


class ConsistencyError(JanusError):
    """Two closed forms of the same quantity disagree."""
