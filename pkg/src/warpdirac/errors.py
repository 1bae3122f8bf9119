"""Exception types shared across the package."""


class InvalidParameter(ValueError):
    """A constructor or operation argument violates its precondition."""


class HypothesisViolation(ValueError):
    """Input data fails a structural hypothesis (e.g. a warp that is not
    integrable at the collar boundary), so the requested transformation
    is not defined."""
