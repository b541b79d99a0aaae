"""Exception types shared across the package."""


class CicalcError(Exception):
    """Base class for every error raised by cicalc."""


class StructuralError(CicalcError):
    """Mismatched ranks, shapes or rings."""


class NonHomogeneousError(CicalcError):
    pass


class RegularSequenceError(CicalcError):
    pass


class DegreeError(CicalcError):
    pass


class NotFiniteLengthError(CicalcError):
    pass


class NotMCMError(CicalcError):
    pass


class ComplexityTooLowError(CicalcError):
    pass


class GenericityFailure(CicalcError):
    """A random choice failed every retry; carries the seeds that were tried."""

    def __init__(self, msg, seeds=()):
        super().__init__(msg)
        self.seeds = list(seeds)


class InconclusiveFit(CicalcError):
    pass


class InconclusiveCohomology(CicalcError):
    def __init__(self, msg, diagnostics=None):
        super().__init__(msg)
        self.diagnostics = diagnostics or {}


class TheoremViolation(CicalcError):
    """A computed instance contradicts a statement that should hold."""


class WindowTooSmall(CicalcError):
    pass


class ParseError(CicalcError):
    def __init__(self, msg, line=0, col=0):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col
        self.msg = msg
