"""Exception types shared across the package.

Every failure mode that callers are expected to handle gets its own class
derived from :class:`QhlabError`, so the service layer can map them to
HTTP status codes and the CLI to exit codes without string matching.
"""

from __future__ import annotations


class QhlabError(Exception):
    """Base class for all package errors."""


class PointOutsideDomain(QhlabError):
    """A query point is not strictly inside the domain."""


class PointTooCloseToBoundary(QhlabError):
    """A query point sits below the solver's boundary margin."""


class ProjectionNotConverged(QhlabError):
    """Nearest-boundary-point search failed to converge."""


class FeetNotUnique(QhlabError):
    """A construction needs a unique nearest boundary point but got several."""


class RegionMissesBoundary(QhlabError):
    """The region given to a boundary estimator contains no boundary points."""


class ExceedsReach(QhlabError):
    """A tubular-coordinate construction was asked for beyond its validity."""


class UnboundedModulus(QhlabError):
    """A modulus of continuity without a finite cap where one is required."""


class NonpositiveDistance(QhlabError):
    """Pair data with a non-positive boundary distance."""


class ConstantOutOfRange(QhlabError):
    """A comparison constant outside its admissible range (e.g. c <= 1)."""


class CurveTouchesBoundary(QhlabError):
    """A curve came closer to the boundary than the integrator allows."""


class Disconnected(QhlabError):
    """No grid path between the query points (box or margin too tight)."""


class StepUnderflow(QhlabError):
    """A finite-difference step would be too small to be meaningful."""


class IoFailure(QhlabError):
    """A report or config file could not be read or written."""


class ConfigError(QhlabError):
    """Malformed or unknown configuration keys."""
