"""Exception hierarchy shared by every module of the package."""


class BlockTbtError(Exception):
    """Base class for all errors raised by blocktbt."""


class DimensionMismatch(BlockTbtError, ValueError):
    def __init__(self, op, shape_a, shape_b):
        self.op = op
        self.shape_a = tuple(shape_a)
        self.shape_b = tuple(shape_b)
        super().__init__(f"{op}: incompatible shapes {self.shape_a} and {self.shape_b}")


class NonFiniteEntry(BlockTbtError, ValueError):
    pass


class SingularMatrix(BlockTbtError, ArithmeticError):
    """Raised by the LU kernel when a pivot falls below the singularity threshold."""

    def __init__(self, pivot_index, pivot_value=0.0, threshold=0.0):
        self.pivot_index = pivot_index
        self.pivot_value = pivot_value
        self.threshold = threshold
        super().__init__(
            f"matrix is singular to working precision at pivot {pivot_index} "
            f"(|pivot| = {abs(pivot_value):.3e} <= {threshold:.3e})"
        )


class PoleAtSpectrum(BlockTbtError, ValueError):
    """The evaluation point coincides with a pole of a resolvent."""


class SpecIncomplete(BlockTbtError, ValueError):
    pass


class NotThreeD(BlockTbtError, ValueError):
    pass


class NotDstu(BlockTbtError, ValueError):
    pass


class NotSelfAdjoint(BlockTbtError, ValueError):
    pass


class TNotInvertible(BlockTbtError, ArithmeticError):
    pass


class GSingular(BlockTbtError, ArithmeticError):
    pass


class ESingular(BlockTbtError, ArithmeticError):
    pass


class DegenerateSamplePair(BlockTbtError, ValueError):
    pass


class PhiPole(BlockTbtError, ValueError):
    pass


class SchemaError(BlockTbtError, ValueError):
    """Malformed spec document; ``pointer`` is a JSON pointer to the offending field."""

    def __init__(self, pointer, message):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")
