"""Exception types shared across the package."""


class BooldimError(Exception):
    """Base class for all errors raised by booldim."""


class CycleDetected(BooldimError):
    pass


class IdOutOfRange(BooldimError):
    pass


class NTooSmall(BooldimError):
    pass


class TDSyntaxError(BooldimError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class InconsistentHeader(BooldimError):
    pass


class InvalidDecomposition(BooldimError):
    def __init__(self, report):
        super().__init__(f"invalid tree-decomposition: {report.summary()}")
        self.report = report


class DomainsOverlap(BooldimError):
    pass


class NotASubset(BooldimError):
    pass


class ImpossiblePattern(BooldimError):
    """Set-membership bits that no pair of distinct elements can produce."""


class PreconditionViolated(BooldimError):
    pass


class LemmaViolation(BooldimError):
    """A D-vertex without exactly one out-neighbour in a child bag."""


class NotAPath(BooldimError):
    pass


class ColorMismatch(BooldimError):
    pass


class BadColorOrder(BooldimError):
    pass


class OddCycle(BooldimError):
    pass


class MalformedKey(BooldimError):
    pass


class UnrealizedSignature(BooldimError):
    pass


class BitLengthMismatch(BooldimError):
    pass


class VersionMismatch(BooldimError):
    pass


class CorruptPayload(BooldimError):
    pass


class LengthMismatch(BooldimError):
    pass
