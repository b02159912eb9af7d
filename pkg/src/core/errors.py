"""Exceptions raised by the tracking library."""


class TrackingError(Exception):
    """Base class for all library errors."""


class ConfigurationError(TrackingError, ValueError):
    """Model or run parameters that cannot produce a valid computation."""


class DegenerateGeometryError(TrackingError, ValueError):
    """Target coincides with a sensor, so bearing is undefined."""


class NormalizationError(TrackingError, ValueError):
    """Weights sum to zero and cannot be normalized."""


class LabelCollisionError(TrackingError, ValueError):
    """Two Bernoulli components would share a label."""


class RunMismatchError(TrackingError, ValueError):
    """Runs being compared were not produced from the same scenario."""
