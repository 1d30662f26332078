"""Exception hierarchy.

Input problems (bad model files, invalid structures, wrong usage) derive from
:class:`InputError` and map to CLI exit code 2.  Anything that means a theorem
or an internal identity failed derives from :class:`TheoremViolation` and maps
to exit code 3.
"""


class CohomkitError(Exception):
    pass


class InputError(CohomkitError, ValueError):
    pass


class ModelError(InputError):
    """A model file or structure fails validation."""


class IntegrabilityError(ModelError):
    pass


class IncompatiblePair(ModelError):
    pass


class UsageError(InputError):
    pass


class ContractViolation(CohomkitError, ValueError):
    """Basis descriptors or subspace containments do not line up."""


class TheoremViolation(CohomkitError, AssertionError):
    """An identity that must hold on every valid input failed."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}
