"""Exception hierarchy shared across csfrot."""


class CsfrotError(Exception):
    """Base class for every error raised by csfrot."""


class InputError(CsfrotError, ValueError):
    """Rejected input: bad parameters, domain violations, malformed configs."""


class InadmissibleProfileError(InputError):
    """No sub-window of the scanned range satisfies the admissibility conditions."""


class FlowError(CsfrotError):
    """Runtime failure of a flow integration.

    ``t`` is the simulated time at which the failure was detected and
    ``partial`` (when set by :func:`csfrot.flow.run`) holds everything
    recorded up to that point.
    """

    def __init__(self, message, t=None, partial=None):
        super().__init__(message)
        self.t = t
        self.partial = partial

    def __str__(self):
        msg = super().__str__()
        if self.t is not None:
            return f"{msg} (t={self.t:.17g})"
        return msg


class FlowDomainError(FlowError):
    """The curve left the validity window or reached the domain floor."""


class BlowupError(FlowError):
    """Curvature exceeded the configured blow-up guard."""


class DtUnderflowError(FlowError):
    """The admissible time step fell below the underflow threshold."""


class MonitorDomainError(FlowError):
    """``k * v**2 >= 1`` somewhere, so the curvature monitor is undefined."""
