"""Exception hierarchy.

The CLI maps these onto exit codes, so the split matters:
input-format problems (bad JSON, wrong schema) are distinct from
physically invalid states, which are distinct from requests outside the
supported state subclass.
"""


class GmqdError(Exception):
    """Base class for all package errors."""


class InputFormatError(GmqdError):
    """Malformed or ambiguous state input (JSON schema violations)."""


class StateValidationError(GmqdError):
    """Base class for physically invalid states."""


class NormalizationError(StateValidationError):
    """Trace differs from one beyond tolerance."""


class UnphysicalStateError(StateValidationError):
    """State fails positivity (negative eigenvalue or block determinant)."""


class UnphysicalBlochError(StateValidationError):
    """Bloch-form reconstruction is not positive semidefinite."""


class StructureError(StateValidationError):
    """Dense matrix has entries outside the X sparsity pattern."""


class KrausCompletenessError(GmqdError):
    """Kraus operators do not sum to the identity channel."""


class UnsupportedSubclassError(GmqdError):
    """Operation defined only for Bell-diagonal states (r = s = 0)."""


class PreconditionError(GmqdError):
    """Caller violated a documented precondition."""
