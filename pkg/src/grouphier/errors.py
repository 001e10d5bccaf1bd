"""Exception hierarchy shared by every module in the package."""


class GroupHierError(Exception):
    """Base class for all package errors."""


class MismatchedRankError(GroupHierError, ValueError):
    pass


class FamilyMismatchError(GroupHierError, TypeError):
    pass


class BadParamError(GroupHierError, ValueError):
    pass


class WindowNotClosedError(GroupHierError):
    """A subgroup-only operation was invoked on a window view."""


class NotClosedError(GroupHierError, ValueError):
    pass


class LabelMismatchError(GroupHierError, ValueError):
    pass


class UnknownLabelError(GroupHierError, KeyError):
    pass


class TooLargeError(GroupHierError):
    pass


class InsufficientWindowError(GroupHierError):
    pass


class VerificationFailed(GroupHierError):
    """Carries the first counterexample pair found by a bijection check."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample
