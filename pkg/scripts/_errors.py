"""
Exception hierarchy for the coloured Kac-Moody toolkit
Every error raised by the library derives from ColouredAlgebraError
"""

from typing import Optional


class ColouredAlgebraError(ValueError):
    """Base class for all library errors"""

    def __init__(self, message: str, stage: Optional[str] = None):
        self.stage = stage
        super().__init__(f"{stage}: {message}" if stage else message)


class OrderMismatch(ColouredAlgebraError):
    """Two truncated series of different orders were combined"""


class NotAUnit(ColouredAlgebraError):
    """Series inversion was requested for a non-unit"""


class NonzeroRemainder(ColouredAlgebraError):
    """An exact polynomial division left a remainder"""


class OutOfWindow(ColouredAlgebraError):
    """A tabulated colouring was read outside its stored window"""


class SymbolicUnsupported(ColouredAlgebraError):
    """A symbolic highest weight was requested where only concrete values exist"""


class AxiomViolation(ColouredAlgebraError):
    """A colouring fails one of the axioms C1-C3"""


class AxiomsUnverified(ColouredAlgebraError):
    """An operation needs a colouring whose axioms have been checked"""


class WindowExceeded(ColouredAlgebraError):
    """No summability cutoff exists inside the stored range"""


class NotHomogeneous(ColouredAlgebraError):
    """An algebra element mixes degrees"""


class MissingStraightening(ColouredAlgebraError):
    """Multiplication was requested without a straightening context"""


class CutoffUnavailable(ColouredAlgebraError):
    """A straightening sequence carries no certified summability cutoff"""


class MixedContext(ColouredAlgebraError):
    """Elements of two different deformed algebras were combined"""


class InputSchemaError(ColouredAlgebraError):
    """An input document does not match its schema"""
