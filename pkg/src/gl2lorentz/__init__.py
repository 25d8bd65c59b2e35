"""Lorentzian and flat affine geometry of GL(2,R)_0.

The bi-invariant metric comes from the trace form k(u, v) = trace(uv) on
gl(2,R), in the orthonormal basis e1..e4 (e1 timelike). The flat affine
structure comes from matrix multiplication.
"""
from .algebra import (
    BASIS,
    E1,
    E2,
    E3,
    E4,
    AlgebraVector,
    CausalType,
    GroupPoint,
    Timecone,
    bracket,
    classify,
    in_timecone_e1,
    k_form,
    killing_form,
    quadratic_form,
)
from .errors import GeometryError, InputError

__version__ = "0.1.0"

__all__ = [
    "BASIS", "E1", "E2", "E3", "E4", "AlgebraVector", "CausalType", "GroupPoint", "Timecone",
    "bracket", "classify", "in_timecone_e1", "k_form", "killing_form", "quadratic_form",
    "GeometryError", "InputError", "__version__",
]
