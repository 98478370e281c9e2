"""Exception and warning types shared across the toolkit."""


class ContractError(ValueError):
    """An input violates a structural precondition (non-Hermitian, wrong shape...)."""


class SingularConfigurationError(ValueError):
    """The requested configuration sits on a singular point of a closed form."""


class RegimeError(ValueError):
    """The inputs fall outside the regime where a model is defined."""


class ConvergenceError(RuntimeError):
    """A time-step integration is under-resolved or failed a refinement check."""


class RegimeWarning(UserWarning):
    """An approximation is evaluated outside its stated range of validity."""
