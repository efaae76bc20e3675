"""Exception hierarchy shared by every module."""


class DeltaScatterError(Exception):
    """Base class for all package errors."""


class DomainError(DeltaScatterError, ValueError):
    """Argument outside the domain of a function."""


class SceneValidationError(DeltaScatterError, ValueError):
    pass


class NonPositiveWavenumber(SceneValidationError):
    pass


class ZeroCoupling(SceneValidationError):
    def __init__(self, index):
        super().__init__(f"scatterer {index} has zero coupling")
        self.index = index


class NonCollinearDFSS(SceneValidationError):
    def __init__(self, max_deviation):
        super().__init__(
            f"DFSS kernels need collinear centers; max deviation {max_deviation:.3e}"
        )
        self.max_deviation = max_deviation


class DuplicatePositionStandard(SceneValidationError):
    def __init__(self, pair):
        super().__init__(
            f"scatterers {pair[0]} and {pair[1]} coincide; the standard kernel diverges"
        )
        self.pair = pair


class ConfigurationError(DeltaScatterError, ValueError):
    pass


class KernelSingularity(DeltaScatterError):
    """An off-diagonal standard kernel entry (or a Green's function) is infinite."""


class SpectralSingularity(DeltaScatterError):
    """The interaction matrix is numerically non-invertible."""

    def __init__(self, message="interaction matrix is singular", diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class EvaluationAtCenter(DeltaScatterError):
    pass


class InfiniteCoupling(DeltaScatterError):
    """Renormalized coupling diverges (its inverse vanishes)."""


class MatchingSingularity(DeltaScatterError):
    pass


class AccuracyError(DeltaScatterError):
    """A truncated expansion is used outside its range of validity."""


class OracleFailure(DeltaScatterError):
    pass


class SceneParseError(DeltaScatterError, ValueError):
    """Malformed scene document; ``where`` is a line/column or a field path."""

    def __init__(self, message, where=None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)
