"""Exception hierarchy shared by every layer of the kernel."""


class ChowDilogError(Exception):
    """Base class. `exit_code` is what the CLI returns for it."""

    exit_code = 2


class NonUnit(ChowDilogError):
    pass


class NonNilpotentConstant(ChowDilogError):
    pass


class PrecisionExceeded(ChowDilogError):
    pass


class ZeroInput(ChowDilogError):
    pass


class WindowTooNarrow(ChowDilogError):
    pass


class FlatViolation(ChowDilogError):
    pass


class BadModulus(ChowDilogError):
    pass


class NotInImage(ChowDilogError):
    exit_code = 1


class NotGood(ChowDilogError):
    def __init__(self, msg, order=None):
        super().__init__(msg)
        self.order = order


class CocycleViolation(ChowDilogError):
    def __init__(self, msg, condition=None):
        super().__init__(msg)
        self.condition = condition


class MultipleRoot(ChowDilogError):
    pass


class NotCongruent(ChowDilogError):
    exit_code = 1


class Unsupported(ChowDilogError):
    pass


class ParseError(ChowDilogError):
    def __init__(self, msg, pos=None, text=None):
        if pos is not None and text is not None:
            msg = f"{msg} at column {pos + 1}\n  {text}\n  {' ' * pos}^"
        super().__init__(msg)
        self.pos = pos
