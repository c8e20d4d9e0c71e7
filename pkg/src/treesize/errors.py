"""Exception types raised across the package."""


class TreesizeError(Exception):
    """Base class for all errors raised by this package."""


class ZeroVector(TreesizeError):
    """All amplitudes are below the normalization threshold."""


class BadPartition(TreesizeError):
    """Qubit index out of range for the state or tree at hand."""


class DimensionMismatch(TreesizeError):
    """Operands live on different numbers of qubits."""


class QubitCoverage(TreesizeError):
    """Tree leaves do not cover or partition the qubits correctly."""


class BraketSyntaxError(TreesizeError):
    """Malformed bra-ket formula; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class Unsupported(TreesizeError):
    """Requested qubit count outside the supported 2-4 range."""


class BudgetTooLarge(TreesizeError):
    """Shape enumeration would exceed the configured cap."""


class BudgetExceeded(TreesizeError):
    """Optimization or scan ran out of its configured budget."""


class Degenerate(TreesizeError):
    """Numerically ambiguous input; the result would be a guess."""


class NotIrreducible(TreesizeError):
    """State does not have the irreducible one-vs-three form."""


class WitnessMissing(TreesizeError):
    """Reducible decomposition requested without a reducibility witness."""


class BadParams(TreesizeError):
    """Parameters violate a nonzero or distinctness constraint."""


# Single-parameter variant used by the Werner-family entry points.
BadParam = BadParams


class BadEnsemble(TreesizeError):
    """Ensemble weights are not a probability distribution."""


class InvalidDensity(TreesizeError):
    """Matrix is not Hermitian, trace-one and positive semidefinite."""


class DegeneratePolynomial(TreesizeError):
    """All coefficients of a root-avoidance polynomial vanish."""
