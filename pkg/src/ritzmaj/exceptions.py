"""Exception hierarchy shared by all ritzmaj modules."""


class RitzMajError(ValueError):
    """Base class for invalid-input conditions detected by ritzmaj."""


class NonFiniteError(RitzMajError):
    pass


class NotHermitianError(RitzMajError):
    pass


class NotPSDError(RitzMajError):
    pass


class EmptySubspaceError(RitzMajError):
    pass


class DimensionError(RitzMajError):
    pass


class NotAcuteError(RitzMajError):
    """Some principal angle is (numerically) a right angle."""


class NotInvariantError(RitzMajError):
    """A subspace required to be A-invariant has a non-negligible residual."""


class GapConditionError(RitzMajError):
    """The spectral-gap hypothesis of a residual angle bound fails."""


class SingularBlockError(RitzMajError):
    pass


class SpectrumError(RitzMajError):
    """A spectrum lies outside the interval an operation requires."""


class MatrixFormatError(RitzMajError):
    pass
