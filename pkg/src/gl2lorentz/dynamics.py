"""Geodesics, parallel transport, Jacobi fields and the isometries I_sigma.

Vector fields along curves are handled through their *reflection*: the
curve in the Lie algebra obtained by left-translating each value back to
the identity, ``y(t) = sigma(t)^-1 Y(t)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .algebra import (
    BASIS_MATRICES,
    HALF_SQRT2,
    SQRT2,
    AlgebraVector,
    CausalType,
    GroupPoint,
    as_group_point,
    as_vector,
    classify,
    CAUSAL_TOL,
)
from .errors import InputError, NotLightlikeError, SingularSystemError
from .ode import rk4

DEGENERATE_TOL = 1e-8
EXPM_SERIES_TOL = 1e-12
SINC_SERIES_TOL = 1e-6


# ------------------------------------------------------------- exponentials


def _sinhc(x2: float) -> float:
    """sinh(sqrt(x2)) / sqrt(x2), continued to x2 <= 0 via sin."""
    if abs(x2) < EXPM_SERIES_TOL:
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0
    if x2 > 0:
        r = np.sqrt(x2)
        return np.sinh(r) / r
    r = np.sqrt(-x2)
    return np.sin(r) / r


def _cosh_sqrt(x2: float) -> float:
    if abs(x2) < EXPM_SERIES_TOL:
        return 1.0 + x2 / 2.0 + x2 * x2 / 24.0
    return np.cosh(np.sqrt(x2)) if x2 > 0 else np.cos(np.sqrt(-x2))


def expm2(m) -> np.ndarray:
    """Exponential of a real 2x2 matrix.

    Writes ``m = mu I + N`` with ``N`` trace-free, so ``N^2 = -det(N) I`` and
    ``exp(N) = cosh(r) I + sinh(r)/r N`` with ``r^2 = -det(N)``.
    """
    m = np.asarray(m, dtype=float)
    mu = 0.5 * np.trace(m)
    n = m - mu * np.eye(2)
    r2 = -(n[0, 0] * n[1, 1] - n[0, 1] * n[1, 0])
    return np.exp(mu) * (_cosh_sqrt(r2) * np.eye(2) + _sinhc(r2) * n)


def exp_geodesic(u, s: float) -> GroupPoint:
    """gamma(s) = exp(s u), the geodesic through the identity with velocity u."""
    return GroupPoint(expm2(s * as_vector(u).matrix))


# ---------------------------------------------------------- lightlike curves


def lightlike_theta(u) -> float:
    """Rotation rate of the lightlike integral curve: sqrt(2ad - 2bc).

    On the lightcone ``2ad - 2bc = (a + d)^2``, so this is ``|a + d|``.
    """
    a, b, c, d = as_vector(u).entries
    return float(np.sqrt(max(2 * a * d - 2 * b * c, 0.0)))


def printed_theta(u) -> float:
    """The printed rate Re(sqrt(2bc - 2ad)); identically zero on the lightcone."""
    a, b, c, d = as_vector(u).entries
    return float(np.sqrt(complex(2 * b * c - 2 * a * d)).real)


def _require_lightlike(u, tol):
    if classify(u, tol) is not CausalType.LIGHTLIKE:
        a, b, c, d = u.entries
        raise NotLightlikeError(f"a^2 + 2bc + d^2 = {a * a + 2 * b * c + d * d:.3e} is not zero")


def lightlike_curve(u, s: float, tol: float = CAUSAL_TOL, theta: float | None = None) -> GroupPoint:
    """Closed-form integral curve through the identity of a lightlike ``u``.

    alpha(s) = e^{(a+d)s/2} [[cos + (a-d)/theta sin, 2b/theta sin],
                              [2c/theta sin, cos - (a-d)/theta sin]]
    with the trigonometric functions evaluated at ``theta s / 2``. Pass
    ``theta`` explicitly to evaluate the form at another rate.
    """
    u = as_vector(u)
    _require_lightlike(u, tol)
    a, b, c, d = u.entries
    th = lightlike_theta(u) if theta is None else theta
    x = th * s / 2.0
    cos = np.cos(x)
    # sin(theta s/2)/theta -> s/2 as theta -> 0
    if abs(x) < SINC_SERIES_TOL:
        sin_over = s / 2.0 * (1.0 - x * x / 6.0)
    else:
        sin_over = np.sin(x) / th
    m = np.array(
        [
            [cos + (a - d) * sin_over, 2 * b * sin_over],
            [2 * c * sin_over, cos - (a - d) * sin_over],
        ]
    )
    return GroupPoint(np.exp((a + d) * s / 2.0) * m)


class TraceDet(NamedTuple):
    trace: float
    det: float


def curve_trace_det_check(u, s: float, tol: float = CAUSAL_TOL, theta: float | None = None) -> TraceDet:
    """Trace and determinant of the lightlike curve from the printed
    closed forms (not from the evaluated matrix)."""
    u = as_vector(u)
    _require_lightlike(u, tol)
    a, b, c, d = u.entries
    th = lightlike_theta(u) if theta is None else theta
    x = th * s / 2.0
    trace = np.exp((a + d) * s / 2.0) * np.cos(x)
    if th == 0.0:
        # 2(ad-bc)/theta^2 sin(theta s/2): finite only when ad - bc = 0
        ratio_term = 0.0 if a * d - b * c == 0.0 else np.copysign(np.inf, (a * d - b * c) * s)
    else:
        ratio_term = 2 * (a * d - b * c) / th**2 * np.sin(x)
    det = np.exp((a + d) * s) * (np.cos(x) + ratio_term)
    return TraceDet(float(trace), float(det))


def printed_characteristic_polynomial(u, s: float) -> np.ndarray:
    """Coefficients of p(l) = l^2 + trace l + det, as printed."""
    td = curve_trace_det_check(u, s)
    return np.array([1.0, td.trace, td.det])


# ---------------------------------------------------------- curves and specs


@dataclass(frozen=True, eq=False)
class GeodesicSpec:
    initial_point: GroupPoint
    initial_velocity: AlgebraVector

    def __post_init__(self):
        object.__setattr__(self, "initial_point", as_group_point(self.initial_point))
        object.__setattr__(self, "initial_velocity", as_vector(self.initial_velocity))


@dataclass(frozen=True, eq=False)
class CurveSample:
    """Time-stamped states; ``derivatives`` is filled for second-order runs."""

    times: np.ndarray
    states: np.ndarray
    derivatives: np.ndarray | None = field(default=None)

    def __post_init__(self):
        t = np.array(self.times, dtype=float)
        s = np.array(self.states, dtype=float)
        if len(t) != len(s):
            raise InputError("times and states differ in length")
        if np.any(np.diff(t) <= 0):
            raise InputError("times must be strictly increasing")
        t.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", s)
        if self.derivatives is not None:
            d = np.array(self.derivatives, dtype=float)
            d.setflags(write=False)
            object.__setattr__(self, "derivatives", d)

    def __len__(self):
        return len(self.times)


# -------------------------------------------------------- parallel transport


def transport_rhs(x, y) -> np.ndarray:
    """Reflected parallel-transport equations along an exp-geodesic with
    constant reflected velocity ``x``."""
    x1, x2, x3, _ = x
    y1, y2, y3, _ = y
    return HALF_SQRT2 * np.array(
        [y3 * x2 - y2 * x3, y3 * x1 - y1 * x3, y1 * x2 - y2 * x1, 0.0]
    )


def parallel_transport(spec: GeodesicSpec, y0, t1: float = 1.0, steps: int = 1000) -> CurveSample:
    """Reflection of the parallel transport of ``y0`` along ``exp(t x0)``."""
    if not np.allclose(spec.initial_point.matrix, np.eye(2), atol=1e-12, rtol=0):
        raise InputError("parallel transport is only provided for geodesics starting at the identity")
    x = spec.initial_velocity.coeffs
    times, states = rk4(lambda t, y: transport_rhs(x, y), as_vector(y0).coeffs, 0.0, t1, steps)
    return CurveSample(times, states)


# ------------------------------------------------------------------ Jacobi


def _velocity(velocity) -> np.ndarray:
    v = np.asarray(as_vector(velocity).coeffs if isinstance(velocity, AlgebraVector) else velocity, dtype=float)
    if v.size != 4:
        raise InputError("velocity needs four coefficients (a, b, c, d)")
    return v.reshape(4)


def jacobi_matrix(velocity) -> np.ndarray:
    """3x3 matrix M with (y1'', y2'', y3'') = M (y1', y2', y3')."""
    a, b, c, _ = _velocity(velocity)
    return SQRT2 * np.array([[0.0, -c, b], [-c, 0.0, a], [b, -a, 0.0]])


def jacobi_rhs(velocity, yprime) -> np.ndarray:
    a, b, c, _ = _velocity(velocity)
    p1, p2, p3, _ = np.asarray(yprime, dtype=float)
    return np.array(
        [
            -SQRT2 * c * p2 + SQRT2 * b * p3,
            -SQRT2 * c * p1 + SQRT2 * a * p3,
            SQRT2 * b * p1 - SQRT2 * a * p2,
            0.0,
        ]
    )


def jacobi_integrate(velocity, y0, yprime0, t1: float = 1.0, steps: int = 1000) -> CurveSample:
    """RK4 on the first-order form (y, y') of the reflected Jacobi system."""
    vel = _velocity(velocity)

    def f(t, z):
        return np.concatenate([z[4:], jacobi_rhs(vel, z[4:])])

    z0 = np.concatenate([np.asarray(y0, float).reshape(4), np.asarray(yprime0, float).reshape(4)])
    times, states = rk4(f, z0, 0.0, t1, steps)
    return CurveSample(times, states[:, :4], states[:, 4:])


class JacobiBranch(enum.Enum):
    GENERIC = "Generic"
    DEGENERATE = "Degenerate"


def _eigvec(m: np.ndarray, lam: complex) -> np.ndarray:
    # null vector of a rank-2 3x3 matrix: the largest cross product of two rows
    a = m - lam * np.eye(3)
    cands = [np.cross(a[0], a[1]), np.cross(a[0], a[2]), np.cross(a[1], a[2])]
    v = max(cands, key=lambda w: np.linalg.norm(w))
    return v / np.linalg.norm(v)


@dataclass(frozen=True, eq=False)
class JacobiClosedForm:
    """Closed-form reflected Jacobi field.

    ``coefficients[i, m]`` multiplies ``modes(t)[m]`` in component ``y_{i+1}``.
    Mode sets:

    * Generic, real alpha: ``1, t, e^{alpha t}, e^{-alpha t}``
    * Generic, imaginary alpha (``alpha = i omega``): ``1, t, cos(omega t), sin(omega t)``
    * Degenerate: ``1, t, t^2, t^3``
    """

    branch: JacobiBranch
    velocity: np.ndarray
    alpha: complex
    constants: np.ndarray
    coefficients: np.ndarray

    @property
    def oscillatory(self) -> bool:
        return self.branch is JacobiBranch.GENERIC and self.alpha.imag != 0.0

    def modes(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        one = np.ones_like(t)
        if self.branch is JacobiBranch.DEGENERATE:
            return np.stack([one, t, t**2, t**3])
        if self.oscillatory:
            w = self.alpha.imag
            return np.stack([one, t, np.cos(w * t), np.sin(w * t)])
        a = self.alpha.real
        return np.stack([one, t, np.exp(a * t), np.exp(-a * t)])

    def mode_derivatives(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        zero, one = np.zeros_like(t), np.ones_like(t)
        if self.branch is JacobiBranch.DEGENERATE:
            return np.stack([zero, one, 2 * t, 3 * t**2])
        if self.oscillatory:
            w = self.alpha.imag
            return np.stack([zero, one, -w * np.sin(w * t), w * np.cos(w * t)])
        a = self.alpha.real
        return np.stack([zero, one, a * np.exp(a * t), -a * np.exp(-a * t)])

    def evaluate(self, t) -> np.ndarray:
        """y(t); shape (4,) for scalar t, else (len(t), 4)."""
        return (self.coefficients @ self.modes(t)).T

    def derivative(self, t) -> np.ndarray:
        return (self.coefficients @ self.mode_derivatives(t)).T


def jacobi_closed_form(velocity, y0, yprime0, tol: float = DEGENERATE_TOL) -> JacobiClosedForm:
    """Fit the closed-form solution to initial data by an 8x8 mode-matching solve."""
    vel = _velocity(velocity)
    a, b, c, _ = vel
    m = jacobi_matrix(vel)
    disc = a * a - b * b - c * c
    alpha2 = -2.0 * disc  # alpha^2 = 2(-a^2 + b^2 + c^2)
    e = np.eye(3)

    # each basis solution: (y at 0, y' at 0, 3x4 coefficient block, y4 part)
    if abs(disc) <= tol:
        branch, alpha = JacobiBranch.DEGENERATE, 0j
        blocks = [np.column_stack([e[i], np.zeros(3), np.zeros(3), np.zeros(3)]) for i in range(3)]
        for j in range(3):
            # y = t e_j + t^2/2 M e_j + t^3/6 M^2 e_j
            blocks.append(np.column_stack([np.zeros(3), e[j], m @ e[j] / 2, m @ m @ e[j] / 6]))
    else:
        branch = JacobiBranch.GENERIC
        n = vel[:3]
        blocks = [np.column_stack([e[i], np.zeros(3), np.zeros(3), np.zeros(3)]) for i in range(3)]
        blocks.append(np.column_stack([np.zeros(3), n, np.zeros(3), np.zeros(3)]))
        if alpha2 > 0:
            lam = np.sqrt(alpha2)
            alpha = complex(lam)
            vp, vm = _eigvec(m, lam).real, _eigvec(m, -lam).real
            blocks.append(np.column_stack([np.zeros(3), np.zeros(3), vp / lam, np.zeros(3)]))
            blocks.append(np.column_stack([np.zeros(3), np.zeros(3), np.zeros(3), -vm / lam]))
        else:
            w = np.sqrt(-alpha2)
            alpha = complex(0.0, w)
            v = _eigvec(m.astype(complex), 1j * w)
            p, q = v.real, v.imag
            # Re/Im of v e^{i w t} / (i w):
            #   Re -> (p sin wt + q cos wt)/w, Im -> (q sin wt - p cos wt)/w
            blocks.append(np.column_stack([np.zeros(3), np.zeros(3), q / w, p / w]))
            blocks.append(np.column_stack([np.zeros(3), np.zeros(3), -p / w, q / w]))

    probe = JacobiClosedForm(branch, vel, alpha, np.zeros(8), np.zeros((4, 4)))
    m0, d0 = probe.modes(0.0), probe.mode_derivatives(0.0)
    basis = np.zeros((8, 8))
    for col, blk in enumerate(blocks):
        basis[0:3, col] = blk @ m0
        basis[4:7, col] = blk @ d0
    # y4 = D0 + D1 t
    basis[3, 6] = 1.0
    basis[7, 7] = 1.0
    rhs = np.concatenate([np.asarray(y0, float).reshape(4), np.asarray(yprime0, float).reshape(4)])
    # reorder rows to (y1..y3, y4, y1'..y3', y4') -- already in that layout
    try:
        consts = np.linalg.solve(basis, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"mode-matching system is singular: {exc}") from exc

    coeffs = np.zeros((4, 4))
    for col, blk in enumerate(blocks):
        coeffs[:3] += consts[col] * blk
    coeffs[3, 0], coeffs[3, 1] = consts[6], consts[7]
    return JacobiClosedForm(branch, vel, alpha, consts, coeffs)


def printed_generic_solution(velocity, consts, t) -> np.ndarray:
    """The printed generic-branch family, evaluated with complex
    arithmetic so that both signs of -a^2 + b^2 + c^2 are covered.

    ``consts`` = (C1, C2, C3, C4, C5); returns (y1, y2, y3, y4) as reals.
    """
    a, b, c, _ = _velocity(velocity)
    c1, c2, c3, c4, c5 = consts
    t = np.asarray(t, dtype=float)
    sd = np.sqrt(complex(-a * a + b * b + c * c))
    pre = 1.0 / (2 * (a * a - b * b - c * c))
    q = SQRT2 * sd
    ep, em = np.exp(q * t), np.exp(-q * t)
    y1 = pre * (2 * a * t * (a * c1 - b * c2 - c * c3)
                + em / q * (b * b * c1 + c * c * c1 - a * b * c2 + c * sd * c2 - a * c * c3 - b * sd * c3)
                + ep / q * (-b * b * c1 - c * c * c1 + a * b * c2 + c * sd * c2 + a * c * c3 - b * sd * c3))
    y2 = pre * (-2 * b * t * (-a * c1 + b * c2 + c * c3)
                + em / q * (a * b * c1 + c * sd * c1 - a * a * c2 + c * c * c2 - b * c * c3 - a * sd * c3)
                + ep / q * (-a * b * c1 + c * sd * c1 + a * a * c2 - c * c * c2 + b * c * c3 - a * sd * c3))
    y3 = pre * (-2 * c * t * (-a * c1 + b * c2 + c * c3)
                + ep / q * (-a * c * c1 - b * sd * c1 + b * c * c2 + a * sd * c2 + a * a * c3 - b * b * c3)
                + em / q * (a * c * c1 - b * sd * c1 - b * c * c2 + a * sd * c2 - a * a * c3 + b * b * c3))
    y4 = c4 * t + c5
    return np.real(np.array([y1, y2, y3, y4 + 0j]))


def printed_degenerate_solution(b: float, c: float, upper: bool, consts, t, corrected: bool = False) -> np.ndarray:
    """The printed family for a^2 = b^2 + c^2.

    ``upper`` picks the upper signs of the +-/-+ pairs. With
    ``corrected=True`` the sign of the t^2 term multiplying C4 in y3 is
    flipped, which makes the family solve the system for
    ``a = -sqrt(b^2 + c^2)`` (upper) or ``+sqrt(b^2 + c^2)`` (lower).
    """
    c1, c2, c3, c4, c5, c6, c7, c8 = consts
    t = np.asarray(t, dtype=float)
    s = np.sqrt(b * b + c * c)
    pm = 1.0 if upper else -1.0
    r = SQRT2
    y3_c4 = (pm if corrected else -pm) * 3 * r * s * t**2
    y1 = (c1 + (3 * t + b * b * t**3 + c * c * t**3) / 3 * c2
          + (-3 * r * c * t**2 + pm * 2 * b * s * t**3) / 6 * c4
          + (3 * r * b * t**2 + pm * 2 * c * s * t**3) / 6 * c6)
    y2 = ((-3 * r * c * t**2 - pm * 2 * b * s * t**3) / 6 * c2 + c3
          + (3 * t - b * b * t**3) / 3 * c4
          + (-pm * 3 * r * s * t**2 - 2 * b * c * t**3) / 6 * c6)
    y3 = ((3 * r * b * t**2 - pm * 2 * c * s * t**3) / 6 * c2
          + (y3_c4 - 2 * b * c * t**3) / 6 * c4
          + c5 + (3 * t - c * c * t**3) / 3 * c6)
    y4 = c7 * t + c8
    return np.array([y1, y2, y3, y4])


def ode_residual(fn, velocity, t: float = 0.4, h: float = 1e-3) -> float:
    """max |y'' - M y'| for a candidate solution, by central differences."""
    yp = (fn(t + h) - fn(t - h)) / (2 * h)
    ypp = (fn(t + h) - 2 * fn(t) + fn(t - h)) / h**2
    want = jacobi_rhs(velocity, yp)
    return float(np.max(np.abs(ypp - want)))


def geodesic_variation_reflection(u, w, s, h: float = 1e-4) -> np.ndarray:
    """Reflected Jacobi field of the variation exp(s (u + eps w)) at eps = 0,
    by central differences in eps."""
    u, w = as_vector(u).matrix, as_vector(w).matrix
    jac = (expm2(s * (u + h * w)) - expm2(s * (u - h * w))) / (2 * h)
    return AlgebraVector.from_matrix(np.linalg.solve(expm2(s * u), jac)).coeffs


# -------------------------------------------------------------- isometries


def isometry_Isigma(sigma, tau) -> GroupPoint:
    """I_sigma(tau) = sigma tau^-1 sigma."""
    s, t = as_group_point(sigma).matrix, as_group_point(tau).matrix
    return GroupPoint(s @ np.linalg.solve(t, s))


def pullback_defect(fn, tau, h: float = 1e-6) -> float:
    """Max |k+(dF U, dF V) - k+(U, V)| over coordinate directions at tau,
    with the differential dF taken by central differences."""
    from .coords import metric_pullback

    tau = as_group_point(tau)
    x = tau.coords
    cols = []
    for i in range(4):
        dx = np.zeros(4)
        dx[i] = h
        plus = as_group_point(fn(GroupPoint.from_coords(x + dx))).coords
        minus = as_group_point(fn(GroupPoint.from_coords(x - dx))).coords
        cols.append((plus - minus) / (2 * h))
    jac = np.column_stack(cols)
    g_img = metric_pullback(as_group_point(fn(tau)))
    g_src = metric_pullback(tau)
    return float(np.max(np.abs(jac.T @ g_img @ jac - g_src)))


# -------------------------------------------------------------- reflection


def reflect(points, vectors) -> CurveSample | np.ndarray:
    """y(t) = sigma(t)^-1 Y(t) in basis coefficients.

    ``points``: sequence of group points (or a CurveSample whose states are
    flattened 2x2 matrices). ``vectors``: matching 2x2 tangent matrices.
    """
    times = None
    if isinstance(points, CurveSample):
        times = points.times
        points = points.states
    mats = np.asarray([as_group_point(np.asarray(p).reshape(2, 2)).matrix for p in points])
    vecs = np.asarray(vectors, dtype=float).reshape(len(mats), 2, 2)
    ys = np.array([AlgebraVector.from_matrix(np.linalg.solve(p, v)).coeffs for p, v in zip(mats, vecs)])
    return CurveSample(times, ys) if times is not None else ys


def unreflect(points, ys) -> np.ndarray:
    """Inverse of ``reflect``: Y(t) = sigma(t) y(t) as 2x2 matrices."""
    if isinstance(points, CurveSample):
        points = points.states
    if isinstance(ys, CurveSample):
        ys = ys.states
    mats = [np.asarray(p, dtype=float).reshape(2, 2) for p in points]
    return np.array([p @ np.einsum("i,iab->ab", y, BASIS_MATRICES) for p, y in zip(mats, ys)])


def geodesic_samples(u, t1: float, steps: int) -> CurveSample:
    """exp(s u) at ``steps + 1`` equally spaced s in [0, t1], flattened."""
    if steps < 1:
        raise InputError("steps must be >= 1")
    s = np.linspace(0.0, t1, steps + 1)
    return CurveSample(s, np.array([exp_geodesic(u, si).coords for si in s]))
