"""Exception hierarchy shared by every module."""


class QuasitoricError(Exception):
    pass


class InvalidInput(QuasitoricError, ValueError):
    pass


class NotFound(QuasitoricError, LookupError):
    pass


class NotNormalizable(QuasitoricError):
    pass


class PreconditionError(QuasitoricError):
    pass


class NoValidB(QuasitoricError):
    pass


class InternalConsistencyError(QuasitoricError):
    pass


class TheoremViolation(QuasitoricError):
    """A machine check of a claimed identity failed.

    ``claim`` names the violated statement in words, ``witness`` carries
    whatever data reproduces the failure.
    """

    def __init__(self, claim, message="", witness=None):
        self.claim = claim
        self.witness = witness
        text = f"{claim} violated"
        if message:
            text += f": {message}"
        super().__init__(text)


class ClassificationFailure(TheoremViolation):
    pass


class NotAnIso(QuasitoricError):
    def __init__(self, message, generator=None):
        self.generator = generator
        super().__init__(message)
