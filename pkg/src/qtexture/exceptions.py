"""Exception hierarchy shared across the package."""


class TextureError(Exception):
    """Base class for every error raised by qtexture."""


class DimensionError(TextureError, ValueError):
    """Bad or mismatched dimensions, or a size cap exceeded."""


class NotHermitianError(TextureError, ValueError):
    pass


class NotPSDError(TextureError, ValueError):
    pass


class NotDensityMatrixError(TextureError, ValueError):
    pass


class SingularPowerError(TextureError, ValueError):
    pass


class DomainError(TextureError, ValueError):
    """A parameter lies outside the domain where a quantity is defined."""


class EigenSolverError(TextureError, ArithmeticError):
    def __init__(self, message, dim=None, condition=None):
        super().__init__(message)
        self.dim = dim
        self.condition = condition


class NonHermitianPairingError(TextureError, ValueError):
    """Tr(M rho) carries an imaginary part larger than rounding can explain."""


class TracePreservationError(TextureError, ValueError):
    pass


class ChannelConstructionError(TextureError, RuntimeError):
    pass


class WitnessError(TextureError, ValueError):
    """The operator is not a texture witness: it detects no state."""
