"""Levi-Civita geometry of the bi-invariant metric and of general
left-invariant metrics on GL(2,R)_0.

Curvature convention: ``R(u, v) w = 1/4 [[u, v], w]`` for the bi-invariant
metric. Under this convention the Ricci tensor ``-B/4`` is *minus* the
contraction ``sum_i eps_i R_m(e_i, u, v, e_i)``; see ``RICCI_CONTRACTION_SIGN``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .algebra import (
    BASIS,
    GRAM,
    HALF_SQRT2,
    SIGNATURE,
    SQRT2,
    STRUCTURE_CONSTANTS,
    AlgebraVector,
    as_vector,
    bracket,
    k_form,
    killing_form,
)
from .errors import (
    DegeneratePlaneError,
    InputError,
    NotOrthogonalError,
    NotSymmetricError,
    SingularSystemError,
)

PLANE_TOL = 1e-10
SYMMETRY_TOL = 1e-12

# ricci(u, v) == RICCI_CONTRACTION_SIGN * sum_i eps_i R_m(e_i, u, v, e_i)
RICCI_CONTRACTION_SIGN = -1.0


@dataclass(frozen=True, eq=False)
class FrameTensor:
    """Dense covariant tensor over the orthonormal frame (rank 2, 3 or 4)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=float)
        if arr.ndim not in (2, 3, 4) or any(n != 4 for n in arr.shape):
            raise InputError(f"frame tensor must be 4^r with r in 2..4, got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def rank(self) -> int:
        return self.data.ndim

    def __getitem__(self, idx):
        return self.data[idx]

    def __call__(self, *vectors) -> float:
        if len(vectors) != self.rank:
            raise InputError(f"expected {self.rank} vectors, got {len(vectors)}")
        out = self.data
        for v in vectors:
            out = np.tensordot(as_vector(v).coeffs, out, axes=(0, 0))
        return float(out)

    def is_symmetric(self, tol: float = SYMMETRY_TOL) -> bool:
        return self.rank == 2 and bool(np.allclose(self.data, self.data.T, atol=tol, rtol=0))


K_METRIC = FrameTensor(GRAM)


def _as_frame_tensor(x) -> FrameTensor:
    return x if isinstance(x, FrameTensor) else FrameTensor(x)


# ---------------------------------------------------------------- bi-invariant


def levi_civita_biinv(u, v) -> AlgebraVector:
    """D_u v = 1/2 [u, v]."""
    return 0.5 * bracket(u, v)


def riemann(u, v, w) -> AlgebraVector:
    return 0.25 * bracket(bracket(u, v), w)


def riemann_covariant(u, v, w, z) -> float:
    return k_form(riemann(u, v, w), z)


def riemann_tensor() -> FrameTensor:
    """R_m(e_i, e_j, e_k, e_l) for all basis quadruples."""
    data = np.empty((4, 4, 4, 4))
    for i, j, k in product(range(4), repeat=3):
        r = riemann(BASIS[i], BASIS[j], BASIS[k]).coeffs
        data[i, j, k] = r * SIGNATURE
    return FrameTensor(data)


def sectional(u, v, tol: float = PLANE_TOL) -> float:
    u, v = as_vector(u), as_vector(v)
    denom = k_form(u, u) * k_form(v, v) - k_form(u, v) ** 2
    if abs(denom) <= tol:
        raise DegeneratePlaneError(f"plane is degenerate (Gram determinant {denom:.3e})")
    w = bracket(u, v)
    return 0.25 * k_form(w, w) / denom


def scalar_curvature() -> float:
    """S = 2 sum_{i<j} K(e_i, e_j)."""
    return 2.0 * sum(sectional(BASIS[i], BASIS[j]) for i in range(4) for j in range(i + 1, 4))


def ricci_tensor(u, v) -> float:
    return -killing_form(u, v) / 4.0


def ricci_matrix() -> FrameTensor:
    return FrameTensor([[ricci_tensor(a, b) for b in BASIS] for a in BASIS])


def ricci_by_contraction() -> FrameTensor:
    rm = riemann_tensor().data
    return FrameTensor(RICCI_CONTRACTION_SIGN * np.einsum("i,iuvi->uv", SIGNATURE, rm))


def kulkarni_nomizu(h, l) -> FrameTensor:
    """(h KN l)(w,x,y,z) = h(w,z)l(x,y) + h(x,y)l(w,z) - h(w,y)l(x,z) - h(x,z)l(w,y)."""
    h, l = _as_frame_tensor(h), _as_frame_tensor(l)
    for t in (h, l):
        if not t.is_symmetric():
            raise NotSymmetricError("Kulkarni-Nomizu product needs symmetric 2-tensors")
    h, l = h.data, l.data
    out = (
        np.einsum("wz,xy->wxyz", h, l)
        + np.einsum("xy,wz->wxyz", h, l)
        - np.einsum("wy,xz->wxyz", h, l)
        - np.einsum("xz,wy->wxyz", h, l)
    )
    return FrameTensor(out)


def weyl_tensor() -> FrameTensor:
    """Trace-free part of the curvature, W = Rm - 1/2 Ric KN k + S/12 k KN k.

    ``Rm`` here carries ``RICCI_CONTRACTION_SIGN`` so that the decomposition
    is taken in the convention where Ricci is the contraction of ``Rm``.
    """
    rm = RICCI_CONTRACTION_SIGN * riemann_tensor().data
    ric = ricci_matrix()
    s = scalar_curvature()
    w = rm - 0.5 * kulkarni_nomizu(ric, K_METRIC).data + s / 12.0 * kulkarni_nomizu(K_METRIC, K_METRIC).data
    return FrameTensor(w)


def weyl_trace(w: FrameTensor) -> np.ndarray:
    """sum_i eps_i W(e_i, u, e_i, v) on basis pairs."""
    return np.einsum("i,iuiv->uv", SIGNATURE, _as_frame_tensor(w).data)


# -------------------------------------------------------------- tidal force


def tidal_force(v, y, tol: float = 1e-10) -> AlgebraVector:
    """F_v(y) = R(y, v) v, defined on the k-orthogonal complement of v."""
    v, y = as_vector(v), as_vector(y)
    if v.norm() == 0.0:
        raise InputError("tidal force needs a nonzero v")
    if abs(k_form(v, y)) > tol:
        raise NotOrthogonalError(f"k(v, y) = {k_form(v, y):.3e} is not zero")
    return riemann(y, v, v)


def tidal_operator(v) -> np.ndarray:
    """Matrix of y -> R(y, v) v on basis coefficients."""
    v = as_vector(v)
    return np.column_stack([riemann(e, v, v).coeffs for e in BASIS])


def tidal_trace(v) -> float:
    # R(v, v) v = 0 and R(y, v) v is k-orthogonal to v, so the full trace
    # equals the trace on the complement for non-null v
    return float(np.trace(tidal_operator(v)))


# ------------------------------------------------ left-invariant metrics


@dataclass(frozen=True, eq=False)
class MetricOperator:
    """A k-symmetric linear isomorphism phi; column j holds phi(e_j)."""

    phi: np.ndarray

    def __post_init__(self):
        phi = np.array(self.phi, dtype=float).reshape(4, 4)
        # k(phi u, v) = k(u, phi v)  <=>  phi^T K == K phi
        if not np.allclose(phi.T @ GRAM, GRAM @ phi, atol=1e-12, rtol=0):
            raise NotSymmetricError("phi is not k-symmetric")
        if abs(np.linalg.det(phi)) <= 1e-10:
            raise SingularSystemError("phi is not invertible")
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)

    def __call__(self, u) -> AlgebraVector:
        return AlgebraVector(self.phi @ as_vector(u).coeffs)


PHI0 = MetricOperator(np.diag([-1.0, 1.0, 1.0, 1.0]))
PHI1 = MetricOperator(np.eye(4))
PHI2 = MetricOperator(np.diag([1.0, -1.0, 1.0, 1.0]))


def metric_from_phi(phi: MetricOperator) -> FrameTensor:
    """Gram matrix of <u, v>_phi = k(phi u, v), i.e. phi^T K."""
    if not isinstance(phi, MetricOperator):
        phi = MetricOperator(phi)
    return FrameTensor(phi.phi.T @ GRAM)


def metric_index(metric) -> int:
    """Number of negative eigenvalues of a symmetric Gram matrix."""
    return int(np.sum(np.linalg.eigvalsh(_as_frame_tensor(metric).data) < 0))


def k_symmetric_constraints() -> dict:
    """Relations among the entries u_ij of a k-symmetric operator.

    Solves ``u^T K - K u = 0`` entrywise for the upper triangle, returning
    e.g. ``{"u12": "-u21", "u23": "u32", ...}``.
    """
    out = {}
    for i in range(4):
        for j in range(i + 1, 4):
            # K_jj u_ji = K_ii u_ij
            ratio = GRAM[j, j] / GRAM[i, i]
            sign = "" if ratio > 0 else "-"
            out[f"u{i + 1}{j + 1}"] = f"{sign}u{j + 1}{i + 1}"
    return out


K0 = metric_from_phi(PHI0)
K1 = metric_from_phi(PHI1)
K2 = metric_from_phi(PHI2)


def christoffel_left_invariant(metric) -> np.ndarray:
    """Gamma[i, j, k] with nabla_{e_i} e_j = sum_k Gamma[i, j, k] e_k.

    Koszul formula for left-invariant fields:
    Gamma_ij^k = 1/2 G^{kl} (-G_jm C_il^m - G_lm C_ji^m + G_im C_lj^m).
    """
    g = _as_frame_tensor(metric).data
    if not np.allclose(g, g.T, atol=SYMMETRY_TOL, rtol=0):
        raise NotSymmetricError("metric must be symmetric")
    if abs(np.linalg.det(g)) <= 1e-12:
        raise SingularSystemError("metric is singular")
    ginv = np.linalg.inv(g)
    c = STRUCTURE_CONSTANTS
    inner = (
        -np.einsum("jm,ilm->ijl", g, c)
        - np.einsum("lm,jim->ijl", g, c)
        + np.einsum("im,ljm->ijl", g, c)
    )
    return 0.5 * np.einsum("kl,ijl->ijk", ginv, inner)


def connection_operators(gamma: np.ndarray) -> np.ndarray:
    """L[i] is the matrix of nabla_{e_i}: L[i][k, j] = Gamma[i, j, k]."""
    return np.transpose(gamma, (0, 2, 1))


def curvature_operator_nonflat(metric, i: int, j: int) -> np.ndarray:
    """nabla_i nabla_j - nabla_j nabla_i - nabla_[e_i, e_j] as a 4x4 matrix."""
    L = connection_operators(christoffel_left_invariant(metric))
    c = STRUCTURE_CONSTANTS
    return L[i] @ L[j] - L[j] @ L[i] - np.einsum("m,mab->ab", c[i, j], L)


# ------------------------------------------------------- printed values
# Values reproduced from the printed tables, kept for audits.

# R(e_i, e_j, e_k) = coef * e_m, 0-based (i, j, k) -> (coef, m)
RIEMANN_TABLE_PRINTED = {
    (0, 1, 0): (0.5, 1), (0, 1, 1): (0.5, 0), (0, 2, 0): (0.5, 2),
    (0, 2, 2): (0.5, 0), (1, 0, 0): (-0.5, 1), (1, 0, 1): (-0.5, 0),
    (1, 2, 1): (-0.5, 2), (1, 2, 2): (0.5, 1), (2, 0, 0): (-0.5, 2),
    (2, 0, 2): (-0.5, 0), (2, 1, 1): (1.0, 2), (2, 1, 2): (-0.5, 1),
}

# nonzero Gamma_ij^k in units of sqrt(2), 0-based
CHRISTOFFEL_PRINTED = {
    "K0": {(0, 1, 2): 1.5, (0, 2, 1): -1.5, (1, 0, 2): 0.5,
           (1, 2, 0): -0.5, (2, 0, 1): -0.5, (2, 1, 0): 0.5},
    "K2": {(0, 1, 2): -0.5, (0, 2, 1): -0.5, (1, 0, 2): -1.5,
           (1, 2, 0): -1.5, (2, 0, 1): 0.5, (2, 1, 0): -0.5},
}

CURVATURE_OPERATOR_PRINTED = {
    ("K0", 0, 2): np.array([[0, 0, -2.5, 0], [0, 0, 0, 0], [2.5, 0, 0, 0], [0, 0, 0, 0.0]]),
    ("K2", 0, 1): np.array([[0, -0.5, 0, 0], [0.5, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0.0]]),
}

PRINTED_CONSTRAINTS = {"u12": "-u21", "u13": "-u31", "u14": "-u41",
                       "u23": "u32", "u24": "u42", "u34": "u43"}


def christoffel_printed(name: str) -> np.ndarray:
    g = np.zeros((4, 4, 4))
    for idx, coef in CHRISTOFFEL_PRINTED[name].items():
        g[idx] = coef * SQRT2
    return g


def weyl_case_value(i: int, j: int, k: int, l: int):
    """Value assigned by the printed Weyl case table, or None if no case
    covers the index pattern. Indices are 1-based, as in the table."""
    if (i == k == 1 and j == l == 2) or (i == k == 1 and j == l == 3) or (i == l == 2 and j == k == 3):
        return 1.5
    if (i == l == 1 and j == k == 2) or (i == l == 1 and j == k == 3) or (i == k == 2 and j == l == 3):
        return -1.5
    if ((i == l and i in (2, 3) and j == k == 4) or (i == l == 4 and j == k and j in (2, 3))
            or (i == k == 1 and j == l == 4) or (i == k == 4 and j == l == 1)):
        return 0.5
    if ((i == l == 1 and j == k == 4) or (i == l == 4 and j == k == 1)
            or (i == k and i in (2, 3) and j == l == 4) or (i == k == 4 and j == l and j in (2, 3))):
        return -0.5
    if i == j == k == l or (i == j == k != l) or len({i, j, k, l}) == 4:
        return 0.0
    return None


def weyl_printed_table() -> tuple[np.ndarray, np.ndarray]:
    """(values, covered): the printed table as a 4^4 array (NaN where no
    case applies) and a boolean mask of covered cells, 0-based."""
    vals = np.full((4, 4, 4, 4), np.nan)
    for idx in product(range(4), repeat=4):
        v = weyl_case_value(*(n + 1 for n in idx))
        if v is not None:
            vals[idx] = v
    return vals, ~np.isnan(vals)


# ------------------------------------------------------------------ audits


def riemann_table_audit(tol: float = 1e-12) -> list[dict]:
    """Cells where the printed curvature table disagrees with 1/4[[u,v],w]."""
    out = []
    for i, j, k in product(range(4), repeat=3):
        got = riemann(BASIS[i], BASIS[j], BASIS[k]).coeffs
        want = np.zeros(4)
        if (i, j, k) in RIEMANN_TABLE_PRINTED:
            coef, m = RIEMANN_TABLE_PRINTED[(i, j, k)]
            want[m] = coef
        if np.max(np.abs(got - want)) > tol:
            out.append({"index": (i + 1, j + 1, k + 1), "printed": want.tolist(), "computed": got.tolist()})
    return out


def weyl_table_audit() -> dict:
    vals, covered = weyl_printed_table()
    w = weyl_tensor().data
    no_scalar = riemann_tensor().data - 0.5 * kulkarni_nomizu(ricci_matrix(), K_METRIC).data
    literal = riemann_tensor().data - 0.5 * kulkarni_nomizu(ricci_matrix(), K_METRIC).data \
        + scalar_curvature() / 12.0 * kulkarni_nomizu(K_METRIC, K_METRIC).data
    table_filled = np.where(covered, vals, 0.0)
    return {
        "covered_cells": int(covered.sum()),
        "uncovered_cells": int((~covered).sum()),
        "max_gap_computed_vs_table": float(np.max(np.abs(w - vals)[covered])),
        "max_gap_table_vs_formula_without_scalar_term": float(np.max(np.abs(no_scalar - vals)[covered])),
        "max_gap_table_vs_literal_formula": float(np.max(np.abs(literal - vals)[covered])),
        "table_trace_e4e4": float(weyl_trace(table_filled)[3, 3]),
        "computed_max_abs": float(np.max(np.abs(w))),
    }


def k0_reference_expression() -> np.ndarray:
    """The matrix expression evaluated in the printed K0 reference cell,
    L3 L1 - L1 L3 + sqrt(2) L2, which differs from the curvature operator."""
    L = connection_operators(christoffel_left_invariant(K0))
    return L[2] @ L[0] - L[0] @ L[2] + SQRT2 * L[1]


__all__ = [
    "FrameTensor", "MetricOperator", "K_METRIC", "K0", "K1", "K2", "PHI0", "PHI1", "PHI2",
    "levi_civita_biinv", "riemann", "riemann_covariant", "riemann_tensor", "sectional",
    "scalar_curvature", "ricci_tensor", "ricci_matrix", "ricci_by_contraction",
    "kulkarni_nomizu", "weyl_tensor", "weyl_trace", "tidal_force", "tidal_operator",
    "tidal_trace", "metric_from_phi", "metric_index", "k_symmetric_constraints",
    "christoffel_left_invariant", "connection_operators", "curvature_operator_nonflat",
    "RICCI_CONTRACTION_SIGN", "HALF_SQRT2",
]
