"""Exception hierarchy shared by all modules."""


class BoltApproxError(Exception):
    """Base class for every error raised by this package."""


class InputError(BoltApproxError, ValueError):
    """Malformed or inconsistent input data."""


class BoltError(InputError):
    """A point sequence is not a valid bolt."""


class ConsecutiveDuplicate(BoltError):
    def __init__(self, position):
        self.position = position
        super().__init__(f"points[{position}] equals the next point")


class BrokenChain(BoltError):
    def __init__(self, position, link):
        self.position = position
        self.link = link
        super().__init__(
            f"required {link}-link between positions {position} and {position + 1} is absent"
        )


class NotClosable(BoltError):
    pass


class NotClosed(BoltError):
    pass


class SignViolation(BoltError):
    """Residuals along a bolt do not alternate in sign."""

    def __init__(self, first, second):
        self.pair = (first, second)
        super().__init__(
            f"residual signs at bolt positions {first} and {second} break alternation"
        )


class ZeroResidual(InputError):
    pass


class GuardExceeded(InputError):
    pass


class NotProductSpace(InputError):
    pass


class SolverError(BoltApproxError, RuntimeError):
    """Internal numerical failure (must not happen on valid inputs)."""


class NonConvergence(SolverError):
    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution
