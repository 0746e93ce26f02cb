"""Exception types shared by the package."""


class SkewAlgError(Exception):
    """Base class for all errors raised by skewalg."""


class FieldError(SkewAlgError):
    pass


class FieldIncompatible(FieldError):
    """The group needs roots of unity or invertibility the field lacks."""


class NotAdmissible(SkewAlgError):
    pass


class DimensionBlowup(SkewAlgError):
    pass


class NotBasic(SkewAlgError):
    pass


class NotNilpotent(SkewAlgError):
    pass


class ActionInvalid(SkewAlgError):
    pass


class AlgebraMismatch(SkewAlgError):
    pass


class NoActionAttached(SkewAlgError):
    pass


class NotAHomomorphism(SkewAlgError):
    pass


class UniverseInvalid(SkewAlgError):
    pass


class Inconclusive(SkewAlgError):
    """A randomised search ran out of budget without a certificate."""


class StabilizerInconclusive(Inconclusive):
    pass


class ClassificationInconclusive(Inconclusive):
    pass


class NotHomogeneous(SkewAlgError):
    pass


class UnsupportedShape(SkewAlgError):
    pass


class ValidationError(SkewAlgError):
    """A workspace object violates one of its invariants."""


class ParseError(SkewAlgError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class UnknownSuite(SkewAlgError):
    pass
