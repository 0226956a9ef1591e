"""Exception types shared across the package."""


class MglError(Exception):
    """Base class for all errors raised by mgl."""


class RankMismatchError(MglError, ValueError):
    pass


class WordSyntaxError(MglError, ValueError):
    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}" + (f" in {text!r}" if text else ""))


class CapExceededError(MglError, RuntimeError):
    """A configurable resource cap was hit before the computation finished.

    ``reached`` records how far the computation got (a radius, a count, ...)
    so callers can report partial progress.
    """

    def __init__(self, message, cap=None, reached=None):
        self.cap = cap
        self.reached = reached
        super().__init__(message)


class SpecError(MglError, ValueError):
    """A group / sequence / witness document is malformed."""

    def __init__(self, message, path=None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class IncompleteWitnessError(MglError, KeyError):
    """The partial map of a LEF witness is undefined where verification needs it."""

    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__(f"witness map undefined on {len(self.missing)} required element(s)")

    def __str__(self):
        return self.args[0]
