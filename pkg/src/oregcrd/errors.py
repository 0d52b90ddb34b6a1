"""Exception hierarchy shared by the package."""


class OreGcrdError(Exception):
    """Base class for every error raised by oregcrd."""


class ModeMismatchError(OreGcrdError, TypeError):
    """Float and exact-rational operands were combined."""


class InterpolationError(OreGcrdError):
    """Inverse FFT left a non-negligible imaginary part."""


class DivisionInstabilityError(OreGcrdError):
    """The divisor nearly vanishes at an FFT evaluation point."""


class ZeroOperandError(OreGcrdError, ZeroDivisionError):
    """An operation that needs a nonzero operand received zero."""


class ParseError(OreGcrdError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class SeparationFailure(OreGcrdError):
    """No usable gap was found among the singular values."""


class ExtractionFailure(OreGcrdError):
    """The GCRD system produced a degenerate annihilator."""


class CandidateRejected(OreGcrdError):
    """A GCRD candidate failed the degree sanity heuristics."""
