class CWSError(Exception):
    """Base class for every error raised by cwsclique."""


class UsageError(CWSError, ValueError):
    """Arguments that do not fit together (length mismatch, bad ranges)."""


class RefusedError(CWSError):
    """A request that is well formed but outside a cap or a precondition."""


class ParseError(CWSError, ValueError):
    def __init__(self, message, path=None, lineno=None):
        where = ""
        if path is not None:
            where = f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}".strip())
        self.path = path
        self.lineno = lineno
