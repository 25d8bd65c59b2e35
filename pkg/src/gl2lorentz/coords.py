"""Natural coordinates (x1, x2, x3, x4) = row-major entries of the matrix.

Coordinate vectors and covectors are length-4 arrays in that order.
Quadratic forms are returned as symmetric 4x4 matrices ``g`` with
``ds^2 = sum_ij g_ij dx_i dx_j``, so a printed cross term ``c dx_i dx_j``
(i < j) corresponds to ``g_ij = g_ji = c / 2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import BASIS_MATRICES, HALF_SQRT2, SIGNATURE, SQRT2, GroupPoint, as_group_point
from .curvature import ricci_matrix
from .errors import InputError

DUALITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FrameFieldValue:
    """Values of e1+..e4+ at ``base``; ``vectors[i]`` is e_{i+1}+."""

    base: GroupPoint
    vectors: np.ndarray

    def __post_init__(self):
        v = np.array(self.vectors, dtype=float).reshape(4, 4)
        sv = np.linalg.svd(v, compute_uv=False)
        if sv[-1] <= 1e-10 * sv[0]:
            raise InputError("frame vectors are linearly dependent")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)


@dataclass(frozen=True, eq=False)
class CoframeFieldValue:
    """Values of (e1+)*..(e4+)* at ``base``; ``covectors[i]`` pairs with dx."""

    base: GroupPoint
    covectors: np.ndarray

    def __post_init__(self):
        c = np.array(self.covectors, dtype=float).reshape(4, 4)
        c.setflags(write=False)
        object.__setattr__(self, "covectors", c)

    def pairing(self, frame: FrameFieldValue) -> np.ndarray:
        """Matrix of covector_i(vector_j); the identity for dual bases."""
        return self.covectors @ frame.vectors.T


def frame_at(p) -> FrameFieldValue:
    """The printed coordinate expressions of e1+..e4+."""
    p = as_group_point(p)
    x1, x2, x3, x4 = p.coords
    vecs = HALF_SQRT2 * np.array(
        [
            [-x2, x1, -x4, x3],
            [x2, x1, x4, x3],
            [x1, -x2, x3, -x4],
            [x1, x2, x3, x4],
        ]
    )
    return FrameFieldValue(p, vecs)


def frame_pushforward(p) -> np.ndarray:
    """p . e_i flattened row-major; independent of the printed frame."""
    m = as_group_point(p).matrix
    return np.array([(m @ e).reshape(4) for e in BASIS_MATRICES])


def coframe_at(p) -> CoframeFieldValue:
    """The printed coordinate expressions of the dual coframe."""
    p = as_group_point(p)
    x1, x2, x3, x4 = p.coords
    covs = np.array(
        [
            [x3, x4, -x1, -x2],
            [-x3, x4, x1, -x2],
            [x4, x3, -x2, -x1],
            [x4, -x3, -x2, x1],
        ]
    ) / (SQRT2 * p.det)
    return CoframeFieldValue(p, covs)


def coframe_from_inverse(p) -> np.ndarray:
    """theta^i(U) = eps_i trace(e_i p^-1 U) as coordinate covectors."""
    pinv = np.linalg.inv(as_group_point(p).matrix)
    # trace(A U) = sum_ab A_ab U_ba, so the dx-row is A^T flattened
    return np.array([s * (e @ pinv).T.reshape(4) for s, e in zip(SIGNATURE, BASIS_MATRICES)])


def metric_at(p) -> np.ndarray:
    """The printed dx-expansion of k+ as a symmetric matrix."""
    p = as_group_point(p)
    x1, x2, x3, x4 = p.coords
    g = np.array(
        [
            [x4 * x4, -x3 * x4, -x2 * x4, x2 * x3],
            [-x3 * x4, x3 * x3, x1 * x4, -x1 * x3],
            [-x2 * x4, x1 * x4, x2 * x2, -x1 * x2],
            [x2 * x3, -x1 * x3, -x1 * x2, x1 * x1],
        ]
    )
    return g / p.det**2


def metric_from_frame(p, reading: str = "squares") -> np.ndarray:
    """k+ assembled from the printed coframe.

    ``reading="squares"``: -th1 th1 + th2 th2 + th3 th3 + th4 th4.
    ``reading="literal"``: the displayed -th1 th1 + th2 th3 + th3 th3 + th4 th4
    (symmetrised).
    """
    th = coframe_at(p).covectors
    if reading == "squares":
        return np.einsum("i,ia,ib->ab", SIGNATURE, th, th)
    if reading == "literal":
        g = -np.outer(th[0], th[0]) + np.outer(th[2], th[2]) + np.outer(th[3], th[3])
        return g + 0.5 * (np.outer(th[1], th[2]) + np.outer(th[2], th[1]))
    raise InputError(f"unknown reading {reading!r}")


def metric_pullback(p) -> np.ndarray:
    """g_ab = trace(p^-1 E_a p^-1 E_b) for the coordinate matrix units E_a."""
    pinv = np.linalg.inv(as_group_point(p).matrix)
    units = np.eye(4).reshape(4, 2, 2)
    left = np.array([pinv @ u for u in units])
    return np.einsum("aij,bji->ab", left, left)


def ricci_coord_frame(p) -> np.ndarray:
    """Pullback of the constant frame Ricci table through the coframe."""
    th = coframe_from_inverse(p)
    return th.T @ ricci_matrix().data @ th


def _ricci_printed_matrix(p: GroupPoint) -> np.ndarray:
    x1, x2, x3, x4 = p.coords
    h = HALF_SQRT2
    diag = [-x1 * x2 / 2 + x1 * x4 / 2 + x2 * x2 / 2, SQRT2 * x1, SQRT2 * x3, SQRT2 * x4]
    cross = {
        (0, 1): h * (x1 + x2),
        (0, 2): h * (x1 + x4),
        (0, 3): h * (x1 + x3),
        (1, 2): h * (-x2 + x4),
        (1, 3): h * (x2 + x3),
        (2, 3): h * (x3 - x4),
    }
    g = np.diag(diag)
    for (i, j), c in cross.items():
        g[i, j] = g[j, i] = c / 2
    return g


@dataclass(frozen=True)
class RicciAudit:
    printed: np.ndarray
    frame: np.ndarray
    max_abs_gap: float


def ricci_coord_printed(p) -> RicciAudit:
    """The printed coordinate Ricci next to the frame-pullback value."""
    p = as_group_point(p)
    printed = _ricci_printed_matrix(p)
    frame = ricci_coord_frame(p)
    return RicciAudit(printed, frame, float(np.max(np.abs(printed - frame))))
