"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ContractError(ValueError):
    """Inputs violate a structural precondition (length mismatch, empty grid, ...)."""


class NoSolution(RuntimeError):
    """The node system has no root inside the admissible parameter box.

    Attributes
    ----------
    corner_signs : dict
        Maps each box corner (tuple of widths) to the sign pattern of the
        residuals Q(t_i) evaluated there.
    """

    def __init__(self, message, corner_signs=None):
        super().__init__(message)
        self.corner_signs = corner_signs or {}
