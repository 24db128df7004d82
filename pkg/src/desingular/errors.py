"""Exception hierarchy shared by every module of the package."""


class DesingError(Exception):
    """Base class for all errors raised by :mod:`desingular`."""


class DegenerateInputError(DesingError, ValueError):
    """An operation received an input for which it is undefined (e.g. ``gcd(0, 0)``)."""


class ModulusError(DesingError, ValueError):
    """A modulus is not monic, not squarefree or has degree < 1."""


class NotInLocalRingError(DesingError, ValueError):
    """A rational function has a pole at the modulus it is projected onto."""


class ModulusSplit(DesingError):
    """Residue arithmetic exposed a zero divisor, so the modulus is reducible.

    Attributes
    ----------
    modulus : Polynomial
        The modulus that turned out to be reducible.
    factor : Polynomial
        A monic proper factor of ``modulus``.
    """

    def __init__(self, modulus, factor):
        self.modulus = modulus
        self.factor = factor.monic()
        super().__init__(f"modulus {modulus} splits off the factor {self.factor}")

    @property
    def cofactor(self):
        return self.modulus.exquo(self.factor).monic()


class SingularMatrixError(DesingError, ZeroDivisionError):
    """A matrix that must be invertible has zero determinant."""


class NotAPoleError(DesingError, ValueError):
    """The polynomial passed as a pole does not divide the denominator."""


class PreconditionError(DesingError, ValueError):
    """An algorithm was called on input violating its documented preconditions."""


class ParseError(DesingError, ValueError):
    """Syntax or semantic error while reading an expression or a document.

    ``position`` is 1-based, or ``None`` when the error is not tied to a column.
    """

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
