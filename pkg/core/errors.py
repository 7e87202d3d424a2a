"""
Define custom error types for this project.

Every algebraic failure carries a stable ``code`` (used in reports and by the CLI)
and, where one exists, a ``witness``: the element indices that show the failure.
"""

from typing import Optional, Sequence


# Errors raised by the algebra...
class AlgebraError(Exception):
    """Base class for algebra-related exceptions."""

    code: str = "E_ALGEBRA"

    def __init__(self, message: str, witness: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.witness = [int(w) for w in witness] if witness is not None else None

    def __str__(self):
        base = super().__str__()
        base += f" | Code: {self.code}"
        if self.witness is not None:
            base += f" | Witness: {self.witness}"
        return base


class NotGroupError(AlgebraError):
    """Raised when a Cayley table fails a group axiom."""
    code = "E_NOT_GROUP"


class NotPermutationError(AlgebraError):
    """Raised when a generator is not a permutation of the point set."""
    code = "E_NOT_PERMUTATION"


class TooLargeError(AlgebraError):
    """Raised when a closure grows past the configured bound."""
    code = "E_TOO_LARGE"


class NotSubgroupError(AlgebraError):
    """Raised when a member set is not closed under products and inverses."""
    code = "E_NOT_SUBGROUP"


class NotMemberError(AlgebraError):
    """Raised when an element lies outside the set an operation needs."""
    code = "E_NOT_MEMBER"


class NotUniquely2DivisibleError(AlgebraError):
    """Raised when the square map on a set is not a bijection."""
    code = "E_NOT_UNIQUELY_2DIV"


class NotHomomorphismError(AlgebraError):
    """Raised when generator images do not extend to a homomorphism."""
    code = "E_NOT_HOMOMORPHISM"


class NotAutomorphismError(AlgebraError):
    """Raised when a map fails to be an automorphism."""
    code = "E_NOT_AUTOMORPHISM"


# Errors with geometries...
class NotInClassError(AlgebraError):
    """Raised when a point is not in the involution class Q."""
    code = "E_NOT_IN_Q"


class NoMidpointError(AlgebraError):
    """Raised when no involution conjugates i to j."""
    code = "E_NO_MIDPOINT"


class MidpointNotUniqueError(AlgebraError):
    """Raised when several involutions conjugate i to j."""
    code = "E_MIDPOINT_NOT_UNIQUE"


class NotClosedError(AlgebraError):
    """Raised when a point set is not closed under the line operation."""
    code = "E_NOT_CLOSED"


# Errors with loops and quasidirect products...
class NotTwistedError(AlgebraError):
    """Raised when a subset is not a twisted subgroup."""
    code = "E_NOT_TWISTED"


class NontrivialCenterError(AlgebraError):
    """Raised when conjugation does not embed the group into Aut(L)."""
    code = "E_NONTRIVIAL_CENTER"


class PrecessionNotInAError(AlgebraError):
    """Raised when some precession map is missing from the automorphism list."""
    code = "E_PRECESSION_NOT_IN_A"


# Errors with Frobenius groups and the catalog...
class NotFrobeniusError(AlgebraError):
    """Raised when a complement is improper, trivial or not malnormal."""
    code = "E_NOT_FROBENIUS"


class KernelNotSubgroupError(AlgebraError):
    """Raised when the Frobenius kernel candidate is not a normal complement."""
    code = "E_KERNEL_NOT_SUBGROUP"


class ComplementNotAbelianError(AlgebraError):
    """Raised when the extension pipeline receives a nonabelian complement."""
    code = "E_COMPLEMENT_NOT_ABELIAN"


class EvenOrderError(AlgebraError):
    """Raised when a cyclic factor of even order is requested."""
    code = "E_EVEN_ORDER"


class UnsupportedOrderError(AlgebraError):
    """Raised for field orders without a built-in field."""
    code = "E_UNSUPPORTED_Q"


class BadParamsError(AlgebraError):
    """Raised for invalid catalog parameters."""
    code = "E_BAD_PARAMS"


class InconsistentCharacteristicError(AlgebraError):
    """Raised when translations of one group have different orders."""
    code = "E_INCONSISTENT_CHAR"


class PreconditionError(AlgebraError):
    """Raised when a documented precondition of an operation fails."""
    code = "E_PRECONDITION"


class LemmaViolationError(AlgebraError):
    """Raised when an identity asserted during construction fails."""
    code = "E_LEMMA_VIOLATION"


# Errors with inputs...
class InputError(AlgebraError):
    """Raised for malformed input files, unknown catalog names and bad CLI usage."""
    code = "E_INPUT"

    def __init__(self, message: str, source: Optional[str] = None):
        super().__init__(message)
        self.source = source

    def __str__(self):
        base = super().__str__()
        if self.source:
            base += f" | Source: {self.source}"
        return base


# Errors with Config...
class ConfigError(Exception):
    """Raised when a configuration value (usually in .env) is invalid."""

    def __init__(
        self,
        variable_name: str,
        message: str = None,
        extra_info: str = None
    ):
        """
        Args:
            variable_name: Name of the config variable.
            message: Optional custom message for the error.
            extra_info: Additional information to append to the error message.
        """
        if message is None:
            message = f"Invalid configuration: {variable_name}. Expected a positive integer."
        if extra_info:
            message += f" | {extra_info}"
        super().__init__(message)
        self.variable_name = variable_name
        self.extra_info = extra_info

    def __str__(self):
        return f"[CONFIG ERROR] {super().__str__()} | Variable: {self.variable_name}"
