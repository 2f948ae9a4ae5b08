"""Exception hierarchy.

``InputError`` subclasses signal bad input (CLI exit code 2); everything else
deriving from ``WallcrossError`` is a computation failure (exit code 3).
"""


class WallcrossError(Exception):
    pass


class InputError(WallcrossError):
    pass


class SchemaError(InputError):
    pass


class NonRationalNumber(InputError):
    pass


class LawrencePairingError(InputError):
    pass


class NotSurjective(WallcrossError):
    pass


class NonGenericTheta(WallcrossError):
    pass


class SameChamber(WallcrossError):
    pass


class NotAdjacent(WallcrossError):
    pass


class SpanFailure(WallcrossError):
    pass


class SideMismatch(WallcrossError):
    pass


class DegenerateCrossing(WallcrossError):
    pass


class SingularBasis(WallcrossError):
    pass


class OrbifoldUnsupported(WallcrossError):
    pass


class SectorMismatch(WallcrossError):
    pass


class BasisNotAdapted(WallcrossError):
    pass
