class UIHPQError(Exception):
    r"""
    Base class of the errors raised by the samplers and constructions.
    """
    pass


class SizeCapExceeded(UIHPQError):
    def __init__(self, cap, what='tree'):
        super(SizeCapExceeded, self).__init__(
            '{} exceeded the size cap of {} edges'.format(what, cap))
        self.cap = cap


class NonCriticalPair(UIHPQError):
    pass


class UnresolvedSuccessor(UIHPQError):
    pass


class WindowTooSmall(UIHPQError):
    pass


class TailNotCertifiable(UIHPQError):
    pass


class MaxAttemptsExceeded(UIHPQError):
    def __init__(self, attempts, acceptance=None):
        message = 'no sample accepted after {} attempts'.format(attempts)
        if acceptance is not None:
            message += ' (mean acceptance probability {:.3g})'.format(acceptance)
        super(MaxAttemptsExceeded, self).__init__(message)
        self.attempts = attempts
        self.acceptance = acceptance


class PerimeterMismatch(UIHPQError):
    pass


class NonSimplePiece(UIHPQError):
    pass


class MalformedLooptree(UIHPQError):
    pass


class BudgetExceeded(UIHPQError):
    pass


class MapFormatError(UIHPQError):
    r"""
    Malformed `.pmap` input; `line` and `column` locate the problem when known.
    """
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = 'line {} column {}: {}'.format(line, column, message)
        super(MapFormatError, self).__init__(message)
        self.line = line
        self.column = column
