"""
Error hierarchy shared by the library and the CLI.

Every error carries a stable ``code`` (the class name) and a human readable
``detail``. The CLI maps ``exit_code`` straight to the process exit status:
2 for numerical failures, 1 for everything else.
"""


class TkpError(Exception):
    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    @property
    def code(self) -> str:
        return type(self).__name__

    def __str__(self) -> str:
        return f"{self.code}: {self.detail}"


class IndexOutOfRange(TkpError, IndexError):
    pass


class ArityMismatch(TkpError, ValueError):
    pass


class ShapeMismatch(TkpError, ValueError):
    pass


class BadPermutation(TkpError, ValueError):
    pass


class EmptyInput(TkpError, ValueError):
    pass


class OrderMismatch(TkpError, ValueError):
    pass


class OrderTooLow(TkpError, ValueError):
    pass


class BadShiftPattern(TkpError, ValueError):
    pass


class InvalidArgument(TkpError, ValueError):
    pass


class FormatError(TkpError, ValueError):
    """Corrupt or foreign file header/payload."""


class SizeOverflow(TkpError, OverflowError):
    pass


class NonFiniteInput(TkpError, ArithmeticError):
    exit_code = 2
