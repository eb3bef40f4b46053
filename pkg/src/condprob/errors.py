"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-contract input."""


class DegenerateBinomialError(InputError):
    pass


class LimitError(RuntimeError):
    """A configured combinatorial or size cap was exceeded."""


class IncompatibleError(Exception):
    """A table of conditional probabilities is not compatible with any joint.

    ``report`` carries the violated relations.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InfeasibleError(InputError):
    """A moment-map target lies outside its polytope."""


class ConvergenceError(RuntimeError):
    pass
