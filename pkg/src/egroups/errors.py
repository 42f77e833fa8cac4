"""Exception types shared across the package."""


class EGroupsError(Exception):
    pass


class RefusedError(EGroupsError):
    """An operation declined to run, usually because a budget or size cap was hit.

    ``estimate`` carries the work size that triggered the refusal, when known.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ModulusMismatch(EGroupsError, ValueError):
    pass


class NotInvertibleError(EGroupsError, ValueError):
    pass


class ConstructionError(EGroupsError):
    """Self-validation of a freshly built group failed; ``counterexample`` holds the offending tuple."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class NotASubgroupError(EGroupsError):
    pass
