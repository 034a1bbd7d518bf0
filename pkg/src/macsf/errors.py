"""Exception hierarchy shared by the solver, the config parser and the CLI."""


class MacsfError(Exception):
    """Base class for all package errors."""


class SolverError(MacsfError):
    """Raised when a flow computation cannot proceed."""


class NonConvex(SolverError):
    """The support grid does not describe a convex curve (S'' + S <= 0 somewhere)."""

    def __init__(self, margin, theta=None):
        self.margin = float(margin)
        self.theta = None if theta is None else float(theta)
        where = "" if theta is None else f" at theta={self.theta:.6f}"
        super().__init__(f"non-convex support grid: S''+S = {self.margin:.6g}{where}")


class StepUnderflow(SolverError):
    """The stable time step fell below the representable threshold."""


class BeyondCollapse(SolverError):
    """Requested an analytic circle state at or after its collapse time."""


class HypothesisViolated(SolverError):
    """A bound was requested outside the regime where it holds."""


class InsufficientTrace(SolverError):
    """A trace has too few recorded states for the requested diagnostic."""


class OmegaNotEstimated(SolverError):
    """The trace carries no usable collapse-time estimate."""


class NonPositiveAxis(MacsfError, ValueError):
    """Ellipse semi-axes must be strictly positive."""


class ParseError(MacsfError):
    """Malformed configuration text."""

    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class ValidationError(MacsfError):
    """A configuration value is well-formed but not acceptable."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
