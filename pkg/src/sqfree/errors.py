"""Exception hierarchy shared by every module."""


class SqfreeError(Exception):
    """Base class for all library errors."""


class ExactnessExceeded(SqfreeError):
    """A membership test cannot be certified at the configured trial bound."""

    def __init__(self, value, trial_bound):
        self.value = value
        self.trial_bound = trial_bound
        super().__init__(
            f"cannot certify P-membership of {value} with trial bound {trial_bound}"
        )


class TheoryViolation(SqfreeError):
    """A formula or value is not admissible under the selected theory."""


class BudgetExhausted(SqfreeError):
    """A witness search ran out of candidates before finding a solution."""

    def __init__(self, message, tested=0):
        self.tested = tested
        super().__init__(message)


class WitnessBoundExhausted(BudgetExhausted):
    """No membership witness below the search bound; the answer is unknown."""


class LocallyUnsatisfiable(SqfreeError):
    """Some prime has no local solution, so no global one exists."""

    def __init__(self, prime, analysis=""):
        self.prime = prime
        self.analysis = analysis
        super().__init__(f"locally unsatisfiable at p={prime}: {analysis}")


class DisjunctLimit(SqfreeError):
    """Disjunctive normal form grew past the configured cap."""
