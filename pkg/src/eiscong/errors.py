"""Exception types shared across the package."""


class EiscongError(Exception):
    """Base class for all errors raised by this package."""


class DomainMismatch(EiscongError, ValueError):
    pass


class DenominatorClash(EiscongError, ValueError):
    """A rational coefficient has a denominator divisible by the target prime."""

    def __init__(self, index, value, r):
        self.index = index
        self.value = value
        self.r = r
        super().__init__(f"coefficient a_{index} = {value} has denominator divisible by {r}")


class InsufficientPrecision(EiscongError, ValueError):
    pass


class PrecisionTooSmall(InsufficientPrecision):
    pass


class SingularCurve(EiscongError, ValueError):
    pass


class NotSemistable(EiscongError, ValueError):
    """Additive reduction at ``p``."""

    def __init__(self, p):
        self.p = p
        super().__init__(f"additive reduction at p={p}: curve is not semistable")


class OffCurve(EiscongError, ValueError):
    pass


class BadPrimeQuery(EiscongError, ValueError):
    pass


class SpecViolation(EiscongError, ValueError):
    pass


class SupportViolation(EiscongError, ValueError):
    """A series that should be supported on multiples of ``s`` is not."""

    def __init__(self, index, residue, s):
        self.index = index
        self.residue = residue
        self.s = s
        super().__init__(f"coefficient {index} is {residue}, not zero, and {s} does not divide {index}")


class NotSpecial(EiscongError, ValueError):
    """Raised when level lowering produces a stream that fails the special-form check."""

    def __init__(self, result):
        self.result = result
        super().__init__(f"lowered stream is not special: {result.detail}")


class TorsionScreenError(EiscongError, RuntimeError):
    """Torsion order outside Mazur's list; indicates a bug or a non-minimal model."""


class ParseError(EiscongError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ValidationError(EiscongError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
