"""Exception hierarchy shared by all modules."""


class SubdcorError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(SubdcorError, ValueError):
    pass


class InsufficientSamplesError(InvalidInputError):
    pass


class EmptyTableError(InvalidInputError):
    pass


class InvalidSpecError(InvalidInputError):
    pass


class SubsampleDegenerateError(SubdcorError, RuntimeError):
    """A Bernoulli subsample kept too few observations even after redrawing."""


class NoValidPError(SubdcorError, RuntimeError):
    """Every candidate inclusion probability produced a degenerate ensemble."""


class PairFormatError(SubdcorError, ValueError):
    """A pair file could not be parsed.

    ``lineno`` is 1-based, or ``None`` when the problem is not tied to a line.
    """

    def __init__(self, message, lineno=None, path=None):
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if lineno is not None:
            where += f":{lineno}"
        super().__init__(f"{where}: {message}" if where else message)


class QuantizationError(SubdcorError, OverflowError):
    pass
