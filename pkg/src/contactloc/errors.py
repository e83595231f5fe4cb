"""Exception types shared across the package."""


class ContactLocError(Exception):
    """Base class for all package-specific errors."""


class ScenarioError(ContactLocError):
    """Raised when a scenario document is malformed or inconsistent.

    The message always names the offending key path.
    """

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class UnrealizableTask(ContactLocError):
    """No hypothesis explains the observations; the task cannot be completed."""


class IndistinguishableHypotheses(ContactLocError):
    """Two hypotheses produce identical contact signatures everywhere."""


class GreedyCycle(ContactLocError):
    """Greedy policy extraction revisited a belief; the value table has not converged."""


class PolicyFormatError(ContactLocError):
    """A serialized policy or database document could not be parsed."""
