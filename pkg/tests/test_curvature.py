from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import vectors
from gl2lorentz import curvature as C
from gl2lorentz.algebra import BASIS, E1, E2, E3, E4, GRAM, SIGNATURE, SQRT2, AlgebraVector, k_form
from gl2lorentz.errors import (
    DegeneratePlaneError,
    InputError,
    NotOrthogonalError,
    NotSymmetricError,
    SingularSystemError,
)


def test_levi_civita_is_half_bracket():
    assert np.allclose(C.levi_civita_biinv(E1, E2).coeffs, SQRT2 / 2 * E3.coeffs)


def test_riemann_examples():
    assert np.allclose(C.riemann(E1, E2, E1).coeffs, 0.5 * E2.coeffs)
    assert np.allclose(C.riemann(E3, E2, E2).coeffs, 0.5 * E3.coeffs)
    assert np.allclose(C.riemann(E4, E1, E2).coeffs, 0.0)


def test_riemann_table_audit_flags_single_cell():
    cells = [a["index"] for a in C.riemann_table_audit()]
    assert cells == [(3, 2, 2)]


@settings(max_examples=100, deadline=None)
@given(vectors, vectors, vectors, vectors)
def test_riemann_symmetries(u, v, w, z):
    r = C.riemann_covariant
    scale = max(1.0, u.norm() * v.norm() * w.norm() * z.norm())
    assert abs(r(u, v, w, z) + r(v, u, w, z)) <= 1e-12 * scale
    assert abs(r(u, v, w, z) + r(u, v, z, w)) <= 1e-12 * scale
    assert abs(r(u, v, w, z) - r(w, z, u, v)) <= 1e-12 * scale
    assert abs(r(u, v, w, z) + r(v, w, u, z) + r(w, u, v, z)) <= 1e-12 * scale


def test_sectional_values():
    for i, j in [(0, 1), (0, 2), (1, 2)]:
        assert C.sectional(BASIS[i], BASIS[j]) == pytest.approx(-0.5, abs=1e-12)
    for i in range(3):
        assert C.sectional(BASIS[i], E4) == pytest.approx(0.0, abs=1e-12)


def test_sectional_degenerate_plane():
    with pytest.raises(DegeneratePlaneError):
        C.sectional(E1, 2 * E1)
    # span(e1 + e2, e3) contains a null vector and has a degenerate Gram matrix
    with pytest.raises(DegeneratePlaneError):
        C.sectional(E1 + E2, E3)


def test_scalar_and_ricci():
    assert C.scalar_curvature() == pytest.approx(-3.0, abs=1e-12)
    assert np.allclose(C.ricci_matrix().data, np.diag([1.0, -1, -1, 0]), atol=1e-12)
    assert np.allclose(C.ricci_by_contraction().data, C.ricci_matrix().data, atol=1e-12)
    assert np.einsum("i,ii->", SIGNATURE, C.ricci_matrix().data) == pytest.approx(-3.0)


def test_kulkarni_nomizu_requires_symmetric():
    with pytest.raises(NotSymmetricError):
        C.kulkarni_nomizu(np.triu(np.ones((4, 4))), GRAM)


def test_kulkarni_nomizu_has_curvature_symmetries(rng):
    a, b = rng.normal(size=(2, 4, 4))
    t = C.kulkarni_nomizu(a + a.T, b + b.T).data
    assert np.allclose(t, -t.transpose(1, 0, 2, 3))
    assert np.allclose(t, t.transpose(2, 3, 0, 1))


def test_weyl_vanishes_and_is_trace_free():
    w = C.weyl_tensor()
    assert np.max(np.abs(w.data)) <= 1e-12
    assert np.max(np.abs(C.weyl_trace(w))) <= 1e-12


def test_weyl_case_table_structure():
    audit = C.weyl_table_audit()
    assert audit["covered_cells"] == 58
    # the printed cells follow Rm - 1/2 Ric(KN)k, whose trace does not vanish
    assert audit["max_gap_table_vs_formula_without_scalar_term"] <= 1e-12
    assert audit["table_trace_e4e4"] == pytest.approx(-1.5)
    assert C.weyl_case_value(1, 2, 1, 2) == 1.5
    assert C.weyl_case_value(1, 1, 2, 2) is None


def test_tidal_force():
    assert np.allclose(C.tidal_force(E1, E2).coeffs, C.riemann(E2, E1, E1).coeffs)
    with pytest.raises(NotOrthogonalError):
        C.tidal_force(E1, E1 + E2)
    with pytest.raises(InputError):
        C.tidal_force(AlgebraVector(np.zeros(4)), E2)


@settings(max_examples=100, deadline=None)
@given(vectors)
def test_tidal_trace_is_minus_ricci(v):
    assert abs(C.tidal_trace(v) + C.ricci_tensor(v, v)) <= 1e-12 * max(1.0, v.norm() ** 2)


def test_metric_operators_and_indices():
    assert np.allclose(C.K0.data, np.eye(4))
    assert np.allclose(C.K1.data, GRAM)
    assert np.allclose(C.K2.data, np.diag([-1.0, -1, 1, 1]))
    assert [C.metric_index(m) for m in (C.K0, C.K1, C.K2)] == [0, 1, 2]
    with pytest.raises(SingularSystemError):
        C.MetricOperator(np.zeros((4, 4)))
    with pytest.raises(NotSymmetricError):
        C.MetricOperator(np.triu(np.ones((4, 4))))


def test_constraints_match_reference():
    assert C.k_symmetric_constraints() == C.PRINTED_CONSTRAINTS


@pytest.mark.parametrize("name", ["K0", "K2"])
def test_christoffel_matches_reference(name):
    got = C.christoffel_left_invariant(getattr(C, name))
    assert np.max(np.abs(got - C.christoffel_printed(name))) <= 1e-12


def test_christoffel_of_k_is_half_bracket():
    gam = C.christoffel_left_invariant(C.K1)
    for i, j in product(range(4), repeat=2):
        assert np.allclose(gam[i, j], C.levi_civita_biinv(BASIS[i], BASIS[j]).coeffs, atol=1e-12)


def test_christoffel_metric_compatible():
    # nabla_i g(e_j, e_k) = 0 for left-invariant fields: g(L_i e_j, e_k) + g(e_j, L_i e_k) = 0
    for name in ("K0", "K1", "K2"):
        g = getattr(C, name).data
        L = C.connection_operators(C.christoffel_left_invariant(getattr(C, name)))
        for i in range(4):
            assert np.allclose(L[i].T @ g + g @ L[i], 0.0, atol=1e-12)


def test_curvature_operator_k2_matches_reference():
    op = C.curvature_operator_nonflat(C.K2, 0, 1)
    assert np.array_equal(np.round(op, 12), C.CURVATURE_OPERATOR_PRINTED[("K2", 0, 1)])


def test_curvature_operator_k0_value():
    op = C.curvature_operator_nonflat(C.K0, 0, 2)
    want = np.zeros((4, 4))
    want[0, 2], want[2, 0] = 0.5, -0.5
    assert np.allclose(op, want, atol=1e-12)
    # the reference matrix comes from a different expression
    assert np.allclose(C.k0_reference_expression(), C.CURVATURE_OPERATOR_PRINTED[("K0", 0, 2)], atol=1e-12)


def test_curvature_operator_of_k_is_bracket_formula():
    for i, j in product(range(4), repeat=2):
        op = C.curvature_operator_nonflat(C.K1, i, j)
        for k in range(4):
            std = -C.riemann(BASIS[i], BASIS[j], BASIS[k]).coeffs
            assert np.allclose(op[:, k], std, atol=1e-12)


def test_frame_tensor_call():
    assert C.K_METRIC(E1, E1) == pytest.approx(k_form(E1, E1))
