"""Exceptions raised by the spectral pipelines."""


class SpectralError(Exception):
    """Base class for every computational failure in lattice_ist."""


class InvalidPotential(SpectralError):
    pass


class NotPalindromic(SpectralError):
    pass


class NonFiniteCoefficients(SpectralError, ValueError):
    """A coefficient overflowed or was given as inf or nan."""


class SingularAtOrigin(SpectralError):
    pass


class DidNotConverge(SpectralError):
    pass


class RootToleranceConflict(SpectralError):
    """A zero of f0 sits too close to z = +1 or z = -1 to classify."""


class ComplexInteriorRoot(SpectralError):
    """A non-real zero of f0 inside the unit disc."""


class DivisionRemainder(SpectralError):
    pass


class ZeroCoefficientResidual(SpectralError):
    pass


class TransmissionMismatch(SpectralError):
    """Laurent and determinant routes for D disagree."""


class SingularSystem(SpectralError):
    def __init__(self, message: str, row: int):
        super().__init__(f"{message} (row {row})")
        self.row = row


class InvalidSpectrum(SpectralError):
    pass


class OddCount(InvalidSpectrum):
    pass


class NotConjugateClosed(InvalidSpectrum):
    pass


class UnusualCase(SpectralError):
    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class RootNearCircle(UserWarning):
    """Zero of f0 close to |z| = 1; the kernel falls back to quadrature."""
