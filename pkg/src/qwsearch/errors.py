"""Exception hierarchy.

The CLI maps :class:`InputDataError` to exit code 3 and :class:`NumericError`
to exit code 4. Bad parameters are plain :class:`ValueError` (exit code 2).
"""


class InputDataError(Exception):
    """Input data (a graph, matrix or partition) is malformed or unusable."""


class GraphFormatError(InputDataError, ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class InvalidGraphError(InputDataError, ValueError):
    """Self-loop, duplicate edge or out-of-range endpoint."""


class DisconnectedGraphError(InputDataError):
    pass


class PartitionError(InputDataError, ValueError):
    """Cells do not form a partition of the vertex set."""


class InequitablePartitionError(PartitionError):
    def __init__(self, vertex: int, cell: int, count: int, expected: int):
        self.vertex = vertex
        self.cell = cell
        super().__init__(
            f"vertex {vertex} has {count} neighbours in cell {cell}, "
            f"other members of its cell have {expected}"
        )


class SymmetryError(InputDataError, ValueError):
    """Matrix is not Hermitian."""


class NumericError(ArithmeticError):
    pass


class ConvergenceError(NumericError):
    pass


class ProbabilityRangeError(NumericError):
    pass
