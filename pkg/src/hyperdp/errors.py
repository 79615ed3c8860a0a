"""Exception types shared across the library.

Each class name doubles as the symbolic error name surfaced by the
command line front end, so renaming one is a breaking change.
"""


class HyperDPError(Exception):
    """Base class for every library-specific error."""

    def payload(self):
        """Structured detail for reports; subclasses may extend."""
        return {"error": type(self).__name__, "detail": str(self)}


class UnknownVertex(HyperDPError):
    pass


class DuplicateVertex(HyperDPError):
    pass


class NotDecomposable(HyperDPError):
    pass


class NotConnected(HyperDPError):
    pass


class UnknownVariable(HyperDPError):
    pass


class DomainMismatch(HyperDPError):
    pass


class ZeroMass(HyperDPError):
    pass


class ZeroConditional(HyperDPError):
    pass


class OutsideDomain(HyperDPError):
    pass


class Inconsistent(HyperDPError):
    """Two measures fail the consistency conditions for combination."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class RefinementViolated(HyperDPError):
    """A separator value admits more than one clique completion."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report

    def payload(self):
        out = super().payload()
        if self.report is not None:
            witness = self.report.first_witness()
            if witness is not None:
                out["witness"] = witness
        return out


class NotMarkov(HyperDPError):
    """Internal check failed: a combined measure did not factorize."""


class ObservationViolatesSupport(HyperDPError):
    """Observed data contradicts the degeneracy structure of the base."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
