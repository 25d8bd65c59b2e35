import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import group_points, random_group_point, spd_matrices, vectors
from gl2lorentz import affine as A
from gl2lorentz.algebra import E1, E4, SQRT2, GroupPoint
from gl2lorentz.coords import metric_pullback
from gl2lorentz.errors import FormulaBreakdownError, InputError, NotSymmetricError

angles = st.floats(-6.0, 6.0)


def test_flat_product_examples():
    assert np.allclose(A.flat_affine_product(E4, E4).coeffs, SQRT2 / 2 * E4.coeffs)
    assert np.allclose(A.flat_affine_product(E1, E1).coeffs, -SQRT2 / 2 * E4.coeffs)


@settings(max_examples=200, deadline=None)
@given(vectors, vectors, vectors)
def test_flat_structure(u, v, w):
    fp = A.flat_affine_product
    scale = max(1.0, u.norm() * v.norm() * w.norm())
    assert (fp(fp(u, v), w) - fp(u, fp(v, w))).norm() <= 1e-12 * scale
    assert A.affine_torsion(u, v).norm() <= 1e-12 * scale
    assert A.affine_curvature(u, v, w).norm() <= 1e-12 * scale


def test_polar_examples():
    p = A.polar_decompose(np.eye(2))
    assert p.t == 0.0 and np.allclose(p.T, np.eye(2))
    p = A.polar_decompose(A.rotation(np.pi / 3))
    assert p.t == pytest.approx(np.pi / 3) and np.allclose(p.T, np.eye(2))
    p = A.polar_decompose(np.diag([2.0, 3.0]))
    assert p.t == 0.0 and np.allclose(p.T, np.diag([2.0, 3.0]))


def test_polar_of_minus_identity():
    p = A.polar_decompose(-np.eye(2))
    assert p.t == pytest.approx(np.pi)


@settings(max_examples=100, deadline=None)
@given(group_points())
def test_polar_roundtrip(g):
    p = A.polar_decompose(g)
    assert -np.pi < p.t <= np.pi
    assert np.allclose(A.cover_project(p).matrix, g.matrix, atol=1e-12 * max(1, np.max(np.abs(g.matrix))))
    assert np.allclose(p.T, A.sqrtm_spd(g.matrix.T @ g.matrix), atol=1e-10 * max(1, np.max(np.abs(p.T))))


def test_project_examples():
    assert np.allclose(A.cover_project(A.CoverPoint(0, np.eye(2))).matrix, np.eye(2))
    assert np.allclose(A.cover_project(A.CoverPoint(2 * np.pi, np.eye(2))).matrix, np.eye(2))
    got = A.cover_project(A.CoverPoint(np.pi / 2, np.diag([1.0, 2.0]))).matrix
    assert np.allclose(got, [[0, -2], [1, 0]], atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(angles, spd_matrices())
def test_polar_inverts_project_mod_2pi(t, T):
    p = A.CoverPoint(t, T)
    back = A.polar_decompose(A.cover_project(p))
    assert np.allclose(back.T, p.T, atol=1e-10 * max(1, np.max(np.abs(T))))
    assert np.isclose(np.angle(np.exp(1j * (back.t - t))), 0.0, atol=1e-10)


def test_sqrtm_spd(rng):
    a = rng.normal(size=(2, 2))
    m = a @ a.T + 0.1 * np.eye(2)
    r = A.sqrtm_spd(m)
    assert np.allclose(r @ r, m)
    assert np.allclose(A.sqrtm_spd(np.zeros((2, 2))), 0.0)


def test_cover_point_validation():
    with pytest.raises(NotSymmetricError):
        A.CoverPoint(0.0, np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(InputError):
        A.CoverPoint(0.0, np.diag([1.0, -1.0]))
    with pytest.raises(InputError):
        A.CoverCoords([0.0, 1.0, 2.0, 1.0])


def test_cover_multiply_examples():
    I = np.eye(2)
    q = A.CoverPoint(0.7, np.diag([2.0, 0.5]))
    got = A.cover_multiply(A.CoverPoint.identity(), q)
    assert got.t == pytest.approx(0.7) and np.allclose(got.T, q.T)
    got = A.cover_multiply(A.CoverPoint(1.0, I), A.CoverPoint(2.0, I))
    assert got.t == pytest.approx(3.0) and np.allclose(got.T, I)


def test_cover_angle_is_not_reduced():
    got = A.cover_multiply(A.CoverPoint(3.0, np.eye(2)), A.CoverPoint(3.0, np.eye(2)))
    assert got.t == pytest.approx(6.0)


@settings(max_examples=100, deadline=None)
@given(angles, spd_matrices(), angles, spd_matrices(), angles, spd_matrices())
def test_cover_group_laws(t, T, r, R, s, S):
    p, q, w = A.CoverPoint(t, T), A.CoverPoint(r, R), A.CoverPoint(s, S)
    pq = A.cover_multiply(p, q)
    proj = A.cover_project(p).matrix @ A.cover_project(q).matrix
    scale = max(1.0, np.max(np.abs(proj)))
    assert np.max(np.abs(A.cover_project(pq).matrix - proj)) <= 1e-10 * scale
    assert np.allclose(pq.T, pq.T.T)
    assert np.all(np.linalg.eigvalsh(pq.T) > 0)
    lhs, rhs = A.cover_multiply(pq, w), A.cover_multiply(p, A.cover_multiply(q, w))
    assert abs(lhs.t - rhs.t) <= 1e-9
    assert np.max(np.abs(lhs.T - rhs.T)) <= 1e-9 * max(1.0, np.max(np.abs(lhs.T)))
    alt = A.cover_multiply_sqrt(p, q)
    assert abs(alt.t - pq.t) <= 1e-9
    assert np.max(np.abs(alt.T - pq.T)) <= 1e-9 * scale


def test_cover_inverse(rng):
    a = rng.normal(size=(2, 2))
    p = A.CoverPoint(5.0, a @ a.T + np.eye(2))
    e = A.cover_multiply(p, A.cover_inverse(p))
    assert abs(e.t) < 1e-10 and np.allclose(e.T, np.eye(2))


def test_breakdown_guard(monkeypatch):
    monkeypatch.setattr(A, "TRACE_TOL", 1e6)
    with pytest.raises(FormulaBreakdownError):
        A.cover_multiply(A.CoverPoint.identity(), A.CoverPoint.identity())


def test_dev_examples():
    assert np.array_equal(A.developing_map([0, 1, 0, 1]), np.zeros(4))
    assert np.array_equal(A.developing_map([1, 2, 0, 1]), [1, 1, 0, 0])
    assert A.dev_image_contains(A.developing_map([3.0, 2.0, 0.5, 1.0]))
    assert not A.dev_image_contains([0.0, -2.0, 0.0, 0.0])


def test_dev_path_integral_general_eta(rng):
    # a closed form that is not constant still integrates path-independently
    def eta(y):
        return np.diag([1.0, 2 * y[1], 1.0, 1.0])

    end = np.array([0.5, 2.0, 0.3, 1.5])
    mid = np.array([-1.0, 0.5, 0.1, 3.0])
    a = A.dev_path_integral([A.BASEPOINT, end], eta)
    b = A.dev_path_integral([A.BASEPOINT, mid, end], eta)
    assert np.allclose(a, b, atol=1e-12)
    assert a[1] == pytest.approx(end[1] ** 2 - 1.0)


def test_dev_differential_is_identity():
    y = np.array([0.2, 1.5, 0.1, 2.0])
    h = 1e-6
    jac = np.column_stack([(A.developing_map(y + h * e) - A.developing_map(y - h * e)) / (2 * h) for e in np.eye(4)])
    assert np.allclose(jac, np.eye(4), atol=1e-8)


def test_potential_examples():
    assert A.hessian_potential(GroupPoint.identity()) == 1.0
    assert A.hessian_potential(np.diag([2.0, 3.0])) == 6.5
    assert A.hessian_potential(np.array([[0.0, 1.0], [-1.0, 0.0]])) == -1.0


def test_gradient_examples(rng):
    assert np.array_equal(A.hessian_gradient([1, 0, 0, 1]), [1, 0, 0, 1])
    assert np.array_equal(A.hessian_gradient([0, 1, 0, 0]), [0, 0, 1, 0])
    h = 1e-5
    for _ in range(50):
        x = rng.normal(size=4)
        fd = [(A.hessian_potential(x + h * e) - A.hessian_potential(x - h * e)) / (2 * h) for e in np.eye(4)]
        assert np.allclose(fd, A.hessian_gradient(x), atol=1e-6)


def test_hessian_matrix(rng):
    H = A.hessian_matrix()
    assert H[1, 2] == 1 and H[1, 1] == 0
    assert np.allclose(np.sort(np.linalg.eigvalsh(H)), [-1, 1, 1, 1])
    for _ in range(10):
        fd = A.finite_difference_hessian(A.hessian_potential, rng.normal(size=4))
        assert np.max(np.abs(fd - H)) <= 1e-5


def test_hessian_vs_metric():
    assert A.hessian_metric_gap(GroupPoint.identity()) == 0.0
    assert A.hessian_metric_gap(np.diag([2.0, 1.0])) > 0.1


def test_log_det_hessian_is_metric(rng):
    p = random_group_point(rng, 0.5, 2.0)
    H = A.finite_difference_hessian(A.log_det_potential, p.coords)
    assert np.allclose(H, metric_pullback(p), atol=1e-5)
