"""Exception types.  All derive from ValueError so callers can catch broadly."""


class PadicError(ValueError):
    pass


class DivisibleByP(PadicError):
    pass


class NotUnit(PadicError):
    pass


class NotPrincipalUnit(PadicError):
    pass


class BadBase(PadicError):
    pass


class InexactDivision(PadicError):
    """A quantity that must be divisible by p^t was not."""


class BadD(PadicError):
    pass


class BadA(PadicError):
    pass


class BadAlpha(PadicError):
    pass


class BadEll(PadicError):
    pass


class OutOfRange(PadicError):
    pass


class ZeroInput(PadicError):
    pass


class NotRational(PadicError):
    """A Galois-stable sum failed to land in the base ring."""


class ClosedFormMismatch(PadicError):
    pass


class NeedsHigherPrecision(PadicError):
    pass


class PrecisionTooLow(PadicError):
    pass


class UnsupportedCharacter(PadicError):
    pass


class NotFound(PadicError):
    pass
