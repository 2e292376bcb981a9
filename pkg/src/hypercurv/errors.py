"""Exception types shared across the package.

Every error carries a stable ``code`` string; the CLI maps codes to exit
status and machine-readable error objects.
"""

from __future__ import annotations


class HypercurvError(Exception):
    """Base class for all package errors."""

    code = "error"


class ParseError(HypercurvError):
    """Malformed hyperedge-list input."""

    code = "parse_error"

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyHypergraphError(HypercurvError):
    """A construction yielded no hyperedges at all."""

    code = "empty_hypergraph"


class DisconnectedError(HypercurvError):
    """Transport requested across distinct connected components."""

    code = "disconnected"


class MarginalError(HypercurvError):
    """Prescribed marginals cannot be coupled (total masses differ)."""

    code = "marginal_mismatch"


class SupportCapExceeded(HypercurvError):
    """Joint support of a multi-marginal problem exceeds the enumeration cap."""

    code = "support_cap_exceeded"


class ConvergenceError(HypercurvError):
    """An iterative solver did not reach its tolerance."""

    code = "convergence_error"

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class EpsilonFloorError(HypercurvError):
    """Regularization too small: kernel entries underflow to zero."""

    code = "epsilon_floor"


class EpsilonInvalidError(HypercurvError):
    """Ball radius fails the surface validity bound."""

    code = "epsilon_invalid"


class CollinearError(HypercurvError):
    """Median of points lying on a single geodesic is not unique."""

    code = "collinear_points"


class NotAnEdgeError(HypercurvError):
    """Pairwise curvature requested for a vertex pair that is not a 2-edge."""

    code = "not_an_edge"


class NotAHyperpathError(HypercurvError):
    """Hyperpath-only operation applied to a non-hyperpath."""

    code = "not_a_hyperpath"


class GeometryError(HypercurvError):
    """Point off the model surface, or a geodesic construction degenerates."""

    code = "geometry_error"


class SizeCapExceeded(HypercurvError):
    """Requested instance is beyond the supported size caps."""

    code = "size_cap_exceeded"


class LPError(HypercurvError):
    """Linear program is infeasible, unbounded, or hit its pivot limit."""

    code = "lp_error"
