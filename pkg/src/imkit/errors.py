"""Exception hierarchy.

Every domain error carries a stable machine-readable ``name`` (the class
name) so the CLI can report it as ``{"error": name, "detail": ...}``.
"""


class ImaginarityError(ValueError):
    """Base class for all domain errors raised by imkit."""

    @property
    def name(self) -> str:
        return type(self).__name__

    @property
    def detail(self) -> str:
        return str(self)


class NonSquare(ImaginarityError):
    pass


class NotHermitian(ImaginarityError):
    pass


class NotUnitTrace(ImaginarityError):
    pass


class NotPositive(ImaginarityError):
    pass


class NotNormalized(ImaginarityError):
    pass


class InvalidBloch(ImaginarityError):
    pass


class NotAntisymmetric(ImaginarityError):
    pass


class DimMismatch(ImaginarityError):
    pass


class DimTooSmall(ImaginarityError):
    pass


class NotReal(ImaginarityError):
    pass


class Overcomplete(ImaginarityError):
    pass


class Incomplete(ImaginarityError):
    pass


class GeometricRequiresPure(ImaginarityError):
    pass


class InvalidPOVM(ImaginarityError):
    pass


class InvalidEnsemble(ImaginarityError):
    pass


class OutOfPlane(ImaginarityError):
    pass


class OutOfRange(ImaginarityError):
    pass


class NotOrthogonal(ImaginarityError):
    pass


class ImproperRotation(ImaginarityError):
    pass


class BadFactorization(ImaginarityError):
    pass


class TooFewOutcomes(ImaginarityError):
    pass


class UnknownTolerance(ImaginarityError):
    pass


class InvalidInput(ImaginarityError):
    """Malformed JSON/CSV payloads and similar format problems."""
