"""Exception types shared across the package."""


class LatregError(Exception):
    """Base class for all errors raised by latreg."""


class StructuralError(LatregError, TypeError):
    """Operands come from different group instances or have incompatible shapes."""


class ContractError(LatregError, ValueError):
    """A documented precondition of an operation does not hold.

    Data-dependent failures (a non-PSD window, a non-PSD ``Z_J``) attach the
    offending ``witness`` and its ``lambda_min``.
    """

    def __init__(self, message: str, witness=None, lambda_min: float | None = None):
        super().__init__(message)
        self.witness = witness
        self.lambda_min = lambda_min


class NumericError(LatregError, ArithmeticError):
    """A numerical routine failed or produced an unusable result."""
