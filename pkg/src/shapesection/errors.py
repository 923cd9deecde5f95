"""Exception types.

``InputError`` subclasses mean the caller handed us something malformed
(exit code 1 from the CLI); ``NumericalError`` subclasses mean the input was
well-formed but the geometry or statistics are degenerate (exit code 2).
"""


class ShapeSectionError(Exception):
    pass


class InputError(ShapeSectionError, ValueError):
    pass


class InvalidContourError(InputError):
    pass


class ConfigError(InputError):
    pass


class NumericalError(ShapeSectionError, ArithmeticError):
    pass


class DegenerateContourError(NumericalError):
    pass


class AmbiguousEllipseError(NumericalError):
    pass


class BoundaryPointError(NumericalError):
    pass


class ReferencePointError(NumericalError):
    pass


class DegenerateClusteringError(NumericalError):
    pass


class DivergenceError(NumericalError):
    pass
