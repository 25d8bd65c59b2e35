"""The Lie algebra gl(2,R) with the trace form and its causal structure.

Vectors are stored as coefficients over the k-orthonormal basis
``e1..e4`` (``e1`` timelike). The 2x2 matrix is derived on demand.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateClassificationError, InputError, NotInGroupError

SQRT2 = np.sqrt(2.0)
HALF_SQRT2 = SQRT2 / 2.0

BASIS_MATRICES = HALF_SQRT2 * np.array(
    [
        [[0.0, 1.0], [-1.0, 0.0]],
        [[0.0, 1.0], [1.0, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
        [[1.0, 0.0], [0.0, 1.0]],
    ]
)

# k(e_i, e_j) = SIGNATURE[i] * delta_ij
SIGNATURE = np.array([-1.0, 1.0, 1.0, 1.0])
GRAM = np.diag(SIGNATURE)

CAUSAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class AlgebraVector:
    """Element of gl(2,R) given by its coefficients over ``e1..e4``."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=float).reshape(4)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_matrix(cls, m) -> "AlgebraVector":
        m = np.asarray(m, dtype=float).reshape(2, 2)
        # orthonormal expansion: f_i = eps_i k(e_i, m)
        return cls(SIGNATURE * np.einsum("iab,ba->i", BASIS_MATRICES, m))

    @classmethod
    def basis(cls, i: int) -> "AlgebraVector":
        c = np.zeros(4)
        c[i] = 1.0
        return cls(c)

    @property
    def matrix(self) -> np.ndarray:
        return np.einsum("i,iab->ab", self.coeffs, BASIS_MATRICES)

    @property
    def entries(self) -> tuple:
        """Matrix entries ``(a, b, c, d)`` of ``[[a, b], [c, d]]``."""
        return tuple(float(x) for x in self.matrix.ravel())

    def __add__(self, other):
        return AlgebraVector(self.coeffs + as_vector(other).coeffs)

    def __sub__(self, other):
        return AlgebraVector(self.coeffs - as_vector(other).coeffs)

    def __neg__(self):
        return AlgebraVector(-self.coeffs)

    def __mul__(self, scalar):
        return AlgebraVector(self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return AlgebraVector(self.coeffs / float(scalar))

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector (not the k-norm)."""
        return float(np.linalg.norm(self.coeffs))

    def __repr__(self):
        return f"AlgebraVector({np.array2string(self.coeffs, precision=6)})"


E1, E2, E3, E4 = (AlgebraVector.basis(i) for i in range(4))
BASIS = (E1, E2, E3, E4)
ZERO = AlgebraVector(np.zeros(4))


def as_vector(x) -> AlgebraVector:
    """Coerce coefficients (length 4) or a 2x2 matrix to an AlgebraVector."""
    if isinstance(x, AlgebraVector):
        return x
    arr = np.asarray(x, dtype=float)
    if arr.shape == (2, 2):
        return AlgebraVector.from_matrix(arr)
    if arr.size == 4:
        return AlgebraVector(arr)
    raise InputError(f"cannot interpret array of shape {arr.shape} as an algebra vector")


@dataclass(frozen=True, eq=False)
class GroupPoint:
    """A 2x2 real matrix with positive determinant."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float).reshape(2, 2)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if not det > 0.0:
            raise NotInGroupError(f"determinant {det!r} is not positive")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "GroupPoint":
        return cls(np.eye(2))

    @classmethod
    def from_coords(cls, x) -> "GroupPoint":
        return cls(np.asarray(x, dtype=float).reshape(2, 2))

    @property
    def coords(self) -> np.ndarray:
        """Natural coordinates ``(x1, x2, x3, x4)``, row-major."""
        return self.matrix.ravel().copy()

    @property
    def det(self) -> float:
        m = self.matrix
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])

    def inverse(self) -> "GroupPoint":
        return GroupPoint(np.linalg.inv(self.matrix))

    def __matmul__(self, other):
        if isinstance(other, GroupPoint):
            return GroupPoint(self.matrix @ other.matrix)
        return self.matrix @ np.asarray(other)

    def __repr__(self):
        return f"GroupPoint({self.matrix.tolist()})"


def as_group_point(x) -> GroupPoint:
    if isinstance(x, GroupPoint):
        return x
    return GroupPoint(np.asarray(x, dtype=float).reshape(2, 2))


def _structure_constants() -> np.ndarray:
    c = np.empty((4, 4, 4))
    for i in range(4):
        for j in range(4):
            a, b = BASIS_MATRICES[i], BASIS_MATRICES[j]
            c[i, j] = AlgebraVector.from_matrix(a @ b - b @ a).coeffs
    return c


# [e_i, e_j] = sum_k STRUCTURE_CONSTANTS[i, j, k] e_k
STRUCTURE_CONSTANTS = _structure_constants()
STRUCTURE_CONSTANTS.setflags(write=False)


def bracket(u, v) -> AlgebraVector:
    """Lie bracket, computed as the matrix commutator."""
    a, b = as_vector(u).matrix, as_vector(v).matrix
    return AlgebraVector.from_matrix(a @ b - b @ a)


def k_form(u, v) -> float:
    """The trace form k(u, v) = trace(uv)."""
    return float(np.trace(as_vector(u).matrix @ as_vector(v).matrix))


def ad_matrix(u) -> np.ndarray:
    """Matrix of ad_u acting on basis coefficients (column j = [u, e_j])."""
    f = as_vector(u).coeffs
    return np.einsum("i,ijk->kj", f, STRUCTURE_CONSTANTS)


def killing_form(u, v) -> float:
    """Cartan-Killing form B(u, v) = trace(ad_u ad_v)."""
    return float(np.trace(ad_matrix(u) @ ad_matrix(v)))


def killing_matrix() -> np.ndarray:
    return np.array([[killing_form(a, b) for b in BASIS] for a in BASIS])


class CausalType(enum.Enum):
    TIMELIKE = "Timelike"
    LIGHTLIKE = "Lightlike"
    SPACELIKE = "Spacelike"


class Timecone(enum.Enum):
    FORWARD = "Forward"
    BACKWARD = "Backward"
    NOT_TIMELIKE = "NotTimelike"


def quadratic_form(u) -> float:
    """q(u) = a^2 + 2bc + d^2 from the matrix entries; equals k(u, u) = trace(u^2)."""
    a, b, c, d = as_vector(u).entries
    return a * a + 2.0 * b * c + d * d


def classify(u, tol: float = CAUSAL_TOL) -> CausalType:
    q = quadratic_form(u)
    if abs(q) < tol:
        return CausalType.LIGHTLIKE
    return CausalType.TIMELIKE if q < 0 else CausalType.SPACELIKE


def in_timecone_e1(u, tol: float = CAUSAL_TOL) -> Timecone:
    """Which timecone of e1 contains ``u``: c < b is forward, c > b backward."""
    if classify(u, tol) is not CausalType.TIMELIKE:
        return Timecone.NOT_TIMELIKE
    _, b, c, _ = as_vector(u).entries
    if abs(c - b) <= tol:
        raise DegenerateClassificationError(
            f"timelike vector with c == b (c - b = {c - b:.3e}) cannot exist"
        )
    return Timecone.FORWARD if c < b else Timecone.BACKWARD


def same_timecone(u, v) -> bool:
    """Timelike u, v lie in the same timecone iff k(u, v) < 0."""
    return k_form(u, v) < 0.0


def timecone_convexity_check(u, v, t: float, tol: float = CAUSAL_TOL) -> bool:
    """Is ``t u + (1 - t) v`` timelike and in the common timecone of u and v?"""
    if not 0.0 <= t <= 1.0:
        raise InputError(f"t = {t} outside [0, 1]")
    cu, cv = in_timecone_e1(u, tol), in_timecone_e1(v, tol)
    if cu is Timecone.NOT_TIMELIKE or cu is not cv:
        raise InputError(f"u and v must share a timecone (got {cu.value}, {cv.value})")
    w = t * as_vector(u) + (1.0 - t) * as_vector(v)
    return in_timecone_e1(w, tol) is cu
