"""Exception hierarchy.

Every error raised by the library derives from :class:`QHIError`, so callers
can catch the whole family at once.  Numerical outcomes that are legitimate
answers (a failed certificate, a "not strongly reversible" verdict) are
returned as data, not raised.
"""


class QHIError(Exception):
    pass


class ZeroInput(QHIError, ValueError):
    pass


class NotImaginary(QHIError, ValueError):
    pass


class DimensionMismatch(QHIError, ValueError):
    pass


class SingularMatrix(QHIError, ValueError):
    pass


class NotInImage(QHIError, ValueError):
    """Complex matrix is not the complex adjoint of a quaternionic matrix."""


class NotInGroup(QHIError, ValueError):
    pass


class WrongModel(QHIError, ValueError):
    """Operation is not defined for the element's Hermitian form model."""


class IllConditioned(QHIError, ArithmeticError):
    """Spectral data falls inside a tolerance band where no decision is safe."""


class NotSemisimple(QHIError, ArithmeticError):
    pass


class OddDimension(QHIError, ValueError):
    """Four-involution factorization requested for odd n.

    The odd case needs a five-involution decomposition of Sp(3) due to
    Djokovic and Malzan (Linear Multilinear Algebra, 1980), which is not
    constructed here.
    """


class BadRecipe(QHIError, ValueError):
    pass


class MalformedDocument(QHIError, ValueError):
    """Input is not a valid element or report document."""
