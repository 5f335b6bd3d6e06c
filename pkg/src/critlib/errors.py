"""Exception hierarchy shared by every critlib module."""

from __future__ import annotations


class CritlibError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class ParseError(CritlibError):
    pass


class Singular(CritlibError):
    pass


class RankDeficiencyNotOne(CritlibError):
    pass


class NotZMatrix(CritlibError):
    pass


class NotAvalancheFinite(CritlibError):
    pass


class InvalidToppling(CritlibError):
    pass


class NegativeInput(CritlibError):
    pass


class TooLarge(CritlibError):
    pass


class NotInImage(CritlibError):
    pass


class NotCovering(CritlibError):
    pass


class NotNonnegative(CritlibError):
    pass


class InvalidType(CritlibError):
    pass


class InvalidRank(InvalidType):
    pass


class NotMinuscule(CritlibError):
    pass


class NotNegativeAtNode(CritlibError):
    pass


class NotIntegral(CritlibError):
    pass


class CorruptTable(CritlibError):
    pass


class UnknownGroup(CritlibError):
    pass


class NoMatchingLinearCharacter(CritlibError):
    pass


class KernelCheckFailed(CritlibError):
    pass


class PresentationsDisagree(CritlibError):
    pass


class NotDegreeZero(CritlibError):
    pass


class GeneratorsInvalid(CritlibError):
    pass


class NotInSL(CritlibError):
    pass
