"""Exception types shared across the simulator."""


class QdsimError(Exception):
    """Base class for simulator errors."""


class DimensionMismatchError(QdsimError):
    """An operator was applied to a qudit of the wrong dimension."""


class LatticeMismatchError(QdsimError):
    """Two states (or a state and an operator) refer to different lattices."""


class MeasurementConsistencyError(QdsimError):
    """A projector family failed its completeness check on a state."""


class DisabledStabilizerError(QdsimError):
    """A stabilizer inside a hole was requested."""


class GeometryError(QdsimError):
    """A ribbon or path violates lattice geometry constraints."""


class ZeroStateError(QdsimError):
    """A map produced the zero vector where a state was required."""
