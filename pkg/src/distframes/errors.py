"""Exception hierarchy shared by every module."""


class DistFrameError(Exception):
    """Base class for all errors raised by the package."""


class NonSquare(DistFrameError, ValueError):
    pass


class NonHermitian(DistFrameError, ValueError):
    pass


class BadTolerance(DistFrameError, ValueError):
    pass


class NonFinite(DistFrameError, ValueError):
    pass


class IllConditioned(DistFrameError, ArithmeticError):
    def __init__(self, ratio: float):
        self.ratio = ratio
        super().__init__(f"lambda_min/lambda_max = {ratio:.3e} is below the solve threshold")


class BadDomain(DistFrameError, ValueError):
    pass


class OverflowRisk(DistFrameError, OverflowError):
    def __init__(self, node: float):
        self.node = node
        super().__init__(f"exp(x^2) overflows at node x = {node!r}")


class GridMismatch(DistFrameError, ValueError):
    pass


class SpaceMismatch(DistFrameError, ValueError):
    pass


class DimensionMismatch(DistFrameError, ValueError):
    pass


class Mismatch(DistFrameError, ValueError):
    """Two maps or operators do not share grid/space."""


class InadequateGrid(DistFrameError, ValueError):
    def __init__(self, defect: float, gate: float):
        self.defect = defect
        self.gate = gate
        super().__init__(f"discrete Gram defect {defect:.3e} exceeds gate {gate:.1e}")


class NotAFrame(DistFrameError, ValueError):
    def __init__(self, lower: float, upper: float):
        self.lower = lower
        self.upper = upper
        super().__init__(f"lower frame bound A = {lower:.3e} is below the floor (B = {upper:.3e})")


class NotGelfand(DistFrameError, ValueError):
    pass


class ParseError(DistFrameError, ValueError):
    pass


class UnknownMapLabel(DistFrameError, KeyError):
    def __str__(self):
        return f"unknown map label {self.args[0]!r}"


class TaskFailure(DistFrameError, RuntimeError):
    def __init__(self, index: int, cause: Exception, what: str = "task"):
        self.index = index
        self.cause = cause
        self.what = what
        super().__init__(f"{what} {index} failed: {type(cause).__name__}: {cause}")
