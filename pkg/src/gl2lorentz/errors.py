"""Exception hierarchy shared by every module.

``InputError`` subclasses flag bad arguments (CLI exit code 2). Everything
else under ``GeometryError`` is a computation that cannot proceed (exit 3).
"""


class GeometryError(Exception):
    """Base class for all errors raised by the package."""


class InputError(GeometryError, ValueError):
    """An argument violates a documented precondition."""


class NotInGroupError(InputError):
    """A matrix with non-positive determinant was given as a group point."""


class NotSymmetricError(InputError):
    """A tensor or operator lacks a required symmetry."""


class NotLightlikeError(InputError):
    pass


class NotOrthogonalError(InputError):
    pass


class DegeneratePlaneError(GeometryError):
    """Sectional curvature requested on a degenerate plane."""


class DegenerateClassificationError(GeometryError):
    """A timelike vector sits on the boundary between the two timecones."""


class SingularSystemError(GeometryError):
    pass


class FormulaBreakdownError(GeometryError):
    """A closed form hits a vanishing denominator."""
