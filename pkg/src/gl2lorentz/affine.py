"""Flat affine structure, the universal cover R x SDP(2), the developing
map and the Hessian potential."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import AlgebraVector, GroupPoint, as_group_point, as_vector, bracket
from .coords import metric_pullback
from .errors import FormulaBreakdownError, InputError, NotSymmetricError

SPD_TOL = 1e-12
TRACE_TOL = 1e-12
OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])
BASEPOINT = np.array([0.0, 1.0, 0.0, 1.0])


# ------------------------------------------------------- flat affine product


def flat_affine_product(u, v) -> AlgebraVector:
    """u o v: the matrix product, defining nabla_{u+} v+ = (u o v)+."""
    return AlgebraVector.from_matrix(as_vector(u).matrix @ as_vector(v).matrix)


def affine_torsion(u, v) -> AlgebraVector:
    return flat_affine_product(u, v) - flat_affine_product(v, u) - bracket(u, v)


def affine_curvature(u, v, w) -> AlgebraVector:
    """u o (v o w) - v o (u o w) - [u, v] o w."""
    return (
        flat_affine_product(u, flat_affine_product(v, w))
        - flat_affine_product(v, flat_affine_product(u, w))
        - flat_affine_product(bracket(u, v), w)
    )


# ------------------------------------------------------------ cover group


def rotation(t: float) -> np.ndarray:
    """O_t, counter-clockwise rotation by t."""
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s], [s, c]])


def sqrtm_spd(m) -> np.ndarray:
    """Square root of a 2x2 SPD matrix: (M + sqrt(det) I) / sqrt(tr + 2 sqrt(det))."""
    m = np.asarray(m, dtype=float)
    rd = np.sqrt(max(np.linalg.det(m), 0.0))
    denom = np.trace(m) + 2 * rd
    if denom < 1e-12:
        w, v = np.linalg.eigh(m)
        return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    return (m + rd * np.eye(2)) / np.sqrt(denom)


def _check_spd(m: np.ndarray) -> None:
    if m.shape != (2, 2):
        raise InputError(f"expected a 2x2 matrix, got shape {m.shape}")
    if abs(m[0, 1] - m[1, 0]) > SPD_TOL * max(1.0, np.max(np.abs(m))):
        raise NotSymmetricError("T is not symmetric")
    if m[0, 0] <= 0 or np.linalg.det(m) <= 0:
        raise InputError("T is not positive definite")


@dataclass(frozen=True, eq=False)
class CoverPoint:
    """(t, T) in R x SDP(2); projects to O_t T."""

    t: float
    T: np.ndarray

    def __post_init__(self):
        m = np.array(self.T, dtype=float)
        _check_spd(m)
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "T", m)

    @classmethod
    def identity(cls) -> "CoverPoint":
        return cls(0.0, np.eye(2))

    def coords(self) -> "CoverCoords":
        return CoverCoords(np.array([self.t, self.T[0, 0], self.T[0, 1], self.T[1, 1]]))


@dataclass(frozen=True, eq=False)
class CoverCoords:
    """(y1, y2, y3, y4) with T = [[y2, y3], [y3, y4]]."""

    y: np.ndarray

    def __post_init__(self):
        y = np.array(self.y, dtype=float).reshape(4)
        if not (y[1] > 0 and y[3] > 0 and y[1] * y[3] - y[2] ** 2 > 0):
            raise InputError("(y2, y3, y4) does not describe a positive-definite matrix")
        y.setflags(write=False)
        object.__setattr__(self, "y", y)

    def point(self) -> CoverPoint:
        _, a, b, c = self.y
        return CoverPoint(self.y[0], np.array([[a, b], [b, c]]))


def polar_decompose(g) -> CoverPoint:
    """g = O_t T with t in (-pi, pi] and T = (g^T g)^(1/2)."""
    m = as_group_point(g).matrix
    t = np.arctan2(m[1, 0] - m[0, 1], m[0, 0] + m[1, 1])
    if t == -np.pi:
        t = np.pi
    T = rotation(-t) @ m
    return CoverPoint(t, 0.5 * (T + T.T))


def cover_project(p: CoverPoint) -> GroupPoint:
    return GroupPoint(rotation(p.t) @ p.T)


def _correction_angle(p: CoverPoint, q: CoverPoint) -> float:
    m = rotation(-q.t) @ p.T @ rotation(q.t) @ q.T
    tr = np.trace(m)
    if tr <= TRACE_TOL:
        raise FormulaBreakdownError(f"trace(O_-r T O_r R) = {tr:.3e} vanishes")
    return float(np.arctan(np.trace(m @ OMEGA) / tr))


def cover_multiply(p: CoverPoint, q: CoverPoint) -> CoverPoint:
    """(t, T) . (r, R) = (phi, O_-phi O_t T O_r R) with phi = arctan(theta) + t + r."""
    phi = _correction_angle(p, q) + p.t + q.t
    S = rotation(-phi) @ rotation(p.t) @ p.T @ rotation(q.t) @ q.T
    return CoverPoint(phi, 0.5 * (S + S.T))


def cover_multiply_sqrt(p: CoverPoint, q: CoverPoint) -> CoverPoint:
    """Product via S = (R O_-r T^2 O_r R)^(1/2) and O_s = O_t T O_r R S^-1.

    The real angle s is the lift of O_s nearest to t + r, which is exact
    because the correction angle lies in (-pi/2, pi/2).
    """
    T, R = p.T, q.T
    S = sqrtm_spd(R @ rotation(-q.t) @ T @ T @ rotation(q.t) @ R)
    Os = rotation(p.t) @ T @ rotation(q.t) @ R @ np.linalg.inv(S)
    s0 = np.arctan2(Os[1, 0], Os[0, 0])
    base = p.t + q.t
    s = s0 + 2 * np.pi * np.round((base - s0) / (2 * np.pi))
    return CoverPoint(s, 0.5 * (S + S.T))


def cover_inverse(p: CoverPoint) -> CoverPoint:
    """Inverse element: lift of (O_t T)^-1 continuous with -t."""
    g = np.linalg.inv(cover_project(p).matrix)
    base = polar_decompose(g)
    t = base.t + 2 * np.pi * np.round((-p.t - base.t) / (2 * np.pi))
    return CoverPoint(t, base.T)


# --------------------------------------------------------- developing map


def developing_map(y) -> np.ndarray:
    """Dev(y1, y2, y3, y4) = (y1, y2 - 1, y3, y4 - 1)."""
    if isinstance(y, CoverPoint):
        y = y.coords()
    if not isinstance(y, CoverCoords):
        y = CoverCoords(y)
    return y.y - BASEPOINT


def dev_image_contains(v) -> bool:
    v1, v2, v3, v4 = np.asarray(v, dtype=float)
    return bool(v2 > -1 and v4 > -1 and (v2 + 1) * (v4 + 1) > v3 * v3)


def eta(y) -> np.ndarray:
    """The parallel coframe in cover coordinates: the identity matrix."""
    return np.eye(4)


def dev_path_integral(
    vertices, eta_fn: Callable[[np.ndarray], np.ndarray] = eta, nodes: int = 8
) -> np.ndarray:
    """Integral of eta along the polygon through ``vertices``.

    The first vertex should be the basepoint (0, 1, 0, 1). Every vertex
    must be a valid cover coordinate; segments then stay inside the
    convex domain. Each segment uses Gauss-Legendre quadrature.
    """
    pts = [CoverCoords(v).y for v in vertices]
    if len(pts) < 2:
        raise InputError("a path needs at least two vertices")
    xs, ws = np.polynomial.legendre.leggauss(nodes)
    s = 0.5 * (xs + 1.0)
    w = 0.5 * ws
    total = np.zeros(4)
    for a, b in zip(pts[:-1], pts[1:]):
        d = b - a
        for si, wi in zip(s, w):
            total += wi * (eta_fn(a + si * d) @ d)
    return total


# ---------------------------------------------------------------- Hessian

HESSIAN_PRINTED = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)


def hessian_potential(p) -> float:
    """f(M) = trace(M^2) / 2."""
    m = np.asarray(p.matrix if isinstance(p, GroupPoint) else p, dtype=float).reshape(2, 2)
    return 0.5 * float(np.trace(m @ m))


def hessian_gradient(p) -> np.ndarray:
    """(x1, x3, x2, x4)."""
    x = np.asarray(p.coords if isinstance(p, GroupPoint) else p, dtype=float).reshape(4)
    return np.array([x[0], x[2], x[1], x[3]])


def hessian_matrix() -> np.ndarray:
    return HESSIAN_PRINTED.copy()


def finite_difference_hessian(f: Callable[[np.ndarray], float], x, h: float = 1e-4) -> np.ndarray:
    """Central second differences of a scalar function of 4 coordinates."""
    x = np.asarray(x, dtype=float)
    H = np.empty((4, 4))
    I = np.eye(4) * h
    for i in range(4):
        for j in range(4):
            H[i, j] = (
                f(x + I[i] + I[j]) - f(x + I[i] - I[j]) - f(x - I[i] + I[j]) + f(x - I[i] - I[j])
            ) / (4 * h * h)
    return H


def log_det_potential(x) -> float:
    """-log det; its coordinate Hessian is k+ exactly."""
    x = np.asarray(x, dtype=float).reshape(4)
    return -float(np.log(x[0] * x[3] - x[1] * x[2]))


def hessian_metric_gap(p) -> float:
    """max |Hess f - k+| in natural coordinates at p."""
    return float(np.max(np.abs(HESSIAN_PRINTED - metric_pullback(as_group_point(p)))))
