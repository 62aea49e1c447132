"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a function is defined."""


class ConvergenceError(RuntimeError):
    """An iterative routine did not reach its tolerance."""


class DivergenceError(ArithmeticError):
    """A coefficient series failed the tail test.

    This is a statement about membership (the distribution is not in the
    requested Sobolev space), not a floating point fault.
    """


class HypothesisError(ValueError):
    """An experiment was configured outside the hypotheses it tests."""
