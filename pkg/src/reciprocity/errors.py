"""Exception hierarchy."""


class ReciprocityError(Exception):
    """Base class for all errors raised by this package."""


class ExpressionSyntaxError(ReciprocityError, ValueError):
    def __init__(self, message: str, text: str = "", position: int = -1):
        self.text = text
        self.position = position
        if position >= 0:
            message = f"{message} at position {position}"
        super().__init__(message)


class PoleOrZeroError(ReciprocityError, ValueError):
    """Evaluation requested at a zero or pole."""


class OnContourError(ReciprocityError, ValueError):
    """A divisor point lies exactly on a contour."""

    def __init__(self, point, circle=None):
        self.point = point
        self.circle = circle
        where = f" {circle}" if circle is not None else ""
        super().__init__(f"divisor point on contour: {point} lies on{where}".rstrip())


class UnderSampledError(ReciprocityError, ValueError):
    """Adjacent samples differ in argument by too close to pi."""


class AmbiguousWindingError(ReciprocityError, ValueError):
    pass


class MismatchedGridError(ReciprocityError, ValueError):
    pass


class DomainError(ReciprocityError, ValueError):
    """Invalid circle configuration for a bordered domain."""


class InadmissibleError(ReciprocityError, ValueError):
    def __init__(self, point, reason: str):
        self.point = point
        self.reason = reason
        super().__init__(f"inadmissible: divisor point {point} {reason}")


class ScenarioError(ReciprocityError, ValueError):
    pass
