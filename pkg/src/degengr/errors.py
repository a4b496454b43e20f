"""Exception hierarchy shared by all modules."""


class DegengrError(Exception):
    """Base class for every error raised by this package."""


class ExprSyntaxError(DegengrError):
    def __init__(self, message, offset, expected=None, text=None):
        self.offset = offset
        self.expected = expected
        self.text = text
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class EvaluationError(DegengrError):
    """Raised when an expression cannot be evaluated.

    ``kind`` is one of ``"unbound"``, ``"division-by-zero"``, ``"domain"``
    or ``"overflow"``; ``subexpr`` is the offending node.
    """

    def __init__(self, kind, subexpr, message):
        self.kind = kind
        self.subexpr = subexpr
        super().__init__(f"{kind}: {message} in `{subexpr}`")


class MetricFileError(DegengrError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class AnnihilatorError(DegengrError):
    """A covector is not in the annihilator of the radical."""


class RadicalStationarityError(DegengrError):
    pass


class DegenerateMetricError(DegengrError):
    pass


class DimensionError(DegengrError):
    pass


class NonLorentzianError(DegengrError):
    pass


class PathError(DegengrError):
    pass


class CatalogError(DegengrError):
    pass


class PresetError(DegengrError):
    pass


class PoleError(DegengrError):
    pass


class ConvergenceError(DegengrError):
    pass
