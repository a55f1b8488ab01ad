class SliceError(Exception):
    """Base class for every error raised by lpslice"""


class InvalidInputError(SliceError, ValueError):
    """Malformed vectors, exponents or queries"""


class DomainError(SliceError, ValueError):
    """Special-function argument outside its domain"""


class DivergentMomentError(DomainError):
    """Moment order at or below the integrability threshold"""


class DimensionError(InvalidInputError):
    """Formula valid only for a specific dimension"""


class AccuracyError(SliceError):
    """Quadrature could not reach the requested tolerance"""


class PreconditionError(InvalidInputError):
    """Lemma hypothesis does not hold at the requested point"""


class EnumerationLimitError(InvalidInputError):
    """Exact sign enumeration requested above its cutoff"""
