"""
Exceptions raised by localsim. Every error carries a short machine readable ``code`` so that the
command line driver can emit structured diagnostics.
"""


class LocalSimError(ValueError):
    """
    Base error for localsim.

    Args:
        message (str): human readable description

        location (str or None): where the problem was found (file:line, ball address, ...)
    """

    code = "LocalSimError"

    def __init__(self, message="", location=None):
        super().__init__(message)
        self.message = message
        self.location = location


class SpaceMismatch(LocalSimError):
    code = "SpaceMismatch"


class NoSubballs(LocalSimError):
    code = "NoSubballs"


class EmptySet(LocalSimError):
    code = "EmptySet"


class InvalidPartition(LocalSimError):
    code = "InvalidPartition"


class NotASubball(LocalSimError):
    code = "NotASubball"


class DomainMismatch(LocalSimError):
    code = "DomainMismatch"


class NotEqualizing(LocalSimError):
    code = "NotEqualizing"


class StructureError(LocalSimError):
    code = "StructureError"


class DomainsNotPartition(LocalSimError):
    code = "DomainsNotPartition"


class CodomainsNotPartition(LocalSimError):
    code = "CodomainsNotPartition"


class EntryNotInSim(LocalSimError):
    code = "EntryNotInSim"


class CarrierMismatch(LocalSimError):
    code = "CarrierMismatch"


class WitnessInvalid(LocalSimError):
    code = "WitnessInvalid"


class NotDuallyContracting(LocalSimError):
    code = "NotDuallyContracting"


class MalformedWitness(LocalSimError):
    code = "MalformedWitness"


class NotRefinement(LocalSimError):
    code = "NotRefinement"


class InvalidChain(LocalSimError):
    code = "InvalidChain"


class TooManyBlocks(LocalSimError):
    code = "TooManyBlocks"


class BudgetExceeded(LocalSimError):
    code = "BudgetExceeded"


class DescriptorSyntaxError(LocalSimError):
    code = "SyntaxError"


class ValidationError(LocalSimError):
    code = "ValidationError"


class NotFiniteSpace(LocalSimError):
    code = "NotFiniteSpace"
