"""Acceptance criteria, one test (and one summary line) per criterion."""
from itertools import product

import numpy as np
from scipy.linalg import expm

from conftest import random_group_point, random_lightlike
from gl2lorentz import affine, curvature, dynamics
from gl2lorentz.algebra import (
    BASIS,
    GRAM,
    SQRT2,
    AlgebraVector,
    CausalType,
    GroupPoint,
    bracket,
    classify,
    in_timecone_e1,
    k_form,
    killing_matrix,
    quadratic_form,
    same_timecone,
    timecone_convexity_check,
)


def _fmt(x):
    return f"{x:.2e}"


def test_ac1_metric_and_brackets(report):
    tol = 1e-12
    k = np.array([[k_form(a, b) for b in BASIS] for a in BASIS])
    k_gap = np.max(np.abs(k - GRAM))
    e1, e2, e3, _ = BASIS
    br_gap = max(
        (bracket(e1, e2) - SQRT2 * e3).norm(),
        (bracket(e1, e3) + SQRT2 * e2).norm(),
        (bracket(e2, e3) + SQRT2 * e1).norm(),
    )
    ok = k_gap <= tol and br_gap <= tol
    report("AC1", ok, f"k-table gap {_fmt(k_gap)}, bracket gap {_fmt(br_gap)} (tol {tol:g})")
    assert ok


def test_ac2_curvature_stack(report):
    tol = 1e-12
    secs = {(i, j): curvature.sectional(BASIS[i], BASIS[j]) for i in range(4) for j in range(i + 1, 4)}
    want = {(0, 1): -0.5, (0, 2): -0.5, (1, 2): -0.5, (0, 3): 0.0, (1, 3): 0.0, (2, 3): 0.0}
    sec_gap = max(abs(secs[p] - v) for p, v in want.items())
    s_gap = abs(curvature.scalar_curvature() + 3.0)
    b_gap = np.max(np.abs(killing_matrix() - np.diag([-4.0, 4, 4, 0])))
    r_gap = np.max(np.abs(curvature.ricci_matrix().data - np.diag([1.0, -1, -1, 0])))
    # full table from the defining bracket formula
    riem_gap = max(
        np.max(np.abs(curvature.riemann(u, v, w).matrix - 0.25 * (bracket(bracket(u, v), w).matrix)))
        for u, v, w in product(BASIS, repeat=3)
    )
    warn = curvature.riemann_table_audit()
    ok = max(sec_gap, s_gap, b_gap, r_gap, riem_gap) <= tol
    report("AC2", ok, f"sectional {_fmt(sec_gap)}, S {_fmt(s_gap)}, B {_fmt(b_gap)}, Ricci {_fmt(r_gap)}, "
                      f"Riemann {_fmt(riem_gap)} (tol {tol:g}); WARN printed table cells {[w['index'] for w in warn]}")
    assert ok


def test_ac3_weyl_case_table(report):
    tol = 1e-12
    w = curvature.weyl_tensor().data
    vals, covered = curvature.weyl_printed_table()
    table_gap = float(np.max(np.abs(w - vals)[covered]))
    uncovered = int((~covered).sum())
    trace_gap = float(np.max(np.abs(curvature.weyl_trace(curvature.weyl_tensor()))))
    ok = table_gap <= tol and uncovered == 0 and trace_gap <= tol
    report("AC3", ok, f"case-table gap {_fmt(table_gap)} on {int(covered.sum())} covered cells "
                      f"({uncovered} uncovered), trace {_fmt(trace_gap)} (tol {tol:g})")
    assert ok


def test_ac4_left_invariant_metrics(report):
    tol = 1e-12
    cons_ok = curvature.k_symmetric_constraints() == curvature.PRINTED_CONSTRAINTS
    idx = [curvature.metric_index(m) for m in (curvature.K0, curvature.K1, curvature.K2)]
    grams_ok = (
        np.allclose(curvature.K0.data, np.eye(4), atol=tol, rtol=0)
        and np.allclose(curvature.K1.data, GRAM, atol=tol, rtol=0)
        and np.allclose(curvature.K2.data, np.diag([-1.0, -1, 1, 1]), atol=tol, rtol=0)
        and idx == [0, 1, 2]
    )
    chr_gap = max(
        np.max(np.abs(curvature.christoffel_left_invariant(getattr(curvature, n)) - curvature.christoffel_printed(n)))
        for n in ("K0", "K2")
    )
    op_gaps = {
        f"{n}({i + 1},{j + 1})": float(np.max(np.abs(
            curvature.curvature_operator_nonflat(getattr(curvature, n), i, j) - printed)))
        for (n, i, j), printed in curvature.CURVATURE_OPERATOR_PRINTED.items()
    }
    ok = cons_ok and grams_ok and chr_gap <= tol and max(op_gaps.values()) <= tol
    report("AC4", ok, f"constraints {cons_ok}, Gram/indices {grams_ok} {idx}, Christoffel gap {_fmt(chr_gap)}, "
                      f"curvature-operator gaps {op_gaps} (tol {tol:g})")
    assert ok


def _jacobi_velocity(rng, kind):
    b, c, d = rng.normal(size=3)
    r = np.hypot(b, c)
    if kind == "real":
        a = r * rng.uniform(-0.9, 0.9)
    elif kind == "imaginary":
        a = r * rng.uniform(1.1, 2.0) * rng.choice([-1.0, 1.0])
    else:
        a = r * rng.choice([-1.0, 1.0])
    return np.array([a, b, c, d])


def test_ac5_jacobi(report):
    tol = 1e-6
    rng = np.random.default_rng(5)
    gap, y4_gap, kinds = 0.0, 0.0, {}
    for n in range(100):
        kind = ("real", "imaginary", "degenerate")[n % 3]
        vel = _jacobi_velocity(rng, kind)
        y0, yp = rng.normal(size=(2, 4))
        cf = dynamics.jacobi_closed_form(vel, y0, yp)
        num = dynamics.jacobi_integrate(vel, y0, yp, 1.0, 1000)
        gap = max(gap, np.max(np.abs(cf.evaluate(num.times) - num.states)))
        y4_gap = max(y4_gap, np.max(np.abs(num.states[:, 3] - (y0[3] + yp[3] * num.times))))
        label = cf.branch.value + ("/imag" if cf.oscillatory else "/real" if kind != "degenerate" else "")
        kinds[label] = kinds.get(label, 0) + 1
    ok = gap <= tol and y4_gap <= 1e-12 and len(kinds) == 3
    report("AC5", ok, f"sup gap {_fmt(gap)} (tol {tol:g}), y4 affine gap {_fmt(y4_gap)}, branches {kinds}")
    assert ok


def test_ac6_transport(report):
    tol = 1e-8
    rng = np.random.default_rng(6)
    drift = 0.0
    for _ in range(20):
        x, y0 = rng.normal(size=(2, 4))
        tr = dynamics.parallel_transport(dynamics.GeodesicSpec(GroupPoint.identity(), x), y0)
        kyy = np.einsum("ni,ij,nj->n", tr.states, GRAM, tr.states)
        kxy = tr.states @ GRAM @ x
        drift = max(drift, np.max(np.abs(kyy - kyy[0])), np.max(np.abs(kxy - kxy[0])))
    y0 = rng.normal(size=4)
    const = dynamics.parallel_transport(dynamics.GeodesicSpec(GroupPoint.identity(), BASIS[3]), y0)
    exact = bool(np.all(const.states == y0))
    ok = drift <= tol and exact
    report("AC6", ok, f"k drift {_fmt(drift)} (tol {tol:g}), x0=e4 constant exactly: {exact}")
    assert ok


def test_ac7_lightlike(report):
    tol = 1e-9
    rng = np.random.default_rng(7)
    curve_gap = det_gap = trace_gap = 0.0
    for _ in range(50):
        u = random_lightlike(rng)
        s = rng.uniform(-3, 3)
        g = expm(s * u.matrix)
        curve_gap = max(curve_gap, np.max(np.abs(dynamics.lightlike_curve(u, s).matrix - g)))
        td = dynamics.curve_trace_det_check(u, s)
        det_gap = max(det_gap, abs(td.det - np.linalg.det(g)))
        trace_gap = max(trace_gap, abs(td.trace - np.trace(g)))
    ok = curve_gap <= tol and det_gap <= tol
    report("AC7", ok, f"curve vs expm {_fmt(curve_gap)}, printed det gap {_fmt(det_gap)} (tol {tol:g}); "
                      f"WARN printed trace gap {_fmt(trace_gap)}")
    assert ok


def test_ac8_cover_group(report):
    rng = np.random.default_rng(8)

    def point():
        a = rng.normal(size=(2, 2))
        return affine.CoverPoint(rng.uniform(-4, 4), a @ a.T + 0.2 * np.eye(2))

    hom = ass = two = 0.0
    for _ in range(100):
        p, q, r = point(), point(), point()
        pq = affine.cover_multiply(p, q)
        proj = affine.cover_project(p).matrix @ affine.cover_project(q).matrix
        hom = max(hom, np.max(np.abs(affine.cover_project(pq).matrix - proj)))
        lhs, rhs = affine.cover_multiply(pq, r), affine.cover_multiply(p, affine.cover_multiply(q, r))
        ass = max(ass, abs(lhs.t - rhs.t), np.max(np.abs(lhs.T - rhs.T)))
        two = max(two, np.max(np.abs(affine.cover_multiply_sqrt(p, q).T - pq.T)))
    ok = hom <= 1e-10 and ass <= 1e-9 and two <= 1e-9
    report("AC8", ok, f"homomorphism {_fmt(hom)} (tol 1e-10), associativity {_fmt(ass)} (tol 1e-9), "
                      f"product formulas {_fmt(two)} (tol 1e-9)")
    assert ok


def test_ac9_developing_map(report):
    tol = 1e-8
    rng = np.random.default_rng(9)
    base = affine.developing_map(affine.BASEPOINT)
    base_exact = bool(np.all(base == 0.0))
    gap = 0.0
    for _ in range(20):
        verts = [affine.BASEPOINT]
        for _ in range(rng.integers(1, 6)):
            a = rng.normal(size=(2, 2))
            T = a @ a.T + 0.2 * np.eye(2)
            verts.append(np.array([rng.uniform(-5, 5), T[0, 0], T[0, 1], T[1, 1]]))
        gap = max(gap, np.max(np.abs(affine.dev_path_integral(verts) - affine.developing_map(verts[-1]))))
    ok = base_exact and gap <= tol
    report("AC9", ok, f"Dev(basepoint)=0 exactly: {base_exact}, path-integral gap {_fmt(gap)} (tol {tol:g})")
    assert ok


def test_ac10_hessian(report):
    rng = np.random.default_rng(10)
    printed = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=float)
    exact = bool(np.array_equal(affine.hessian_matrix(), printed))
    fd = max(
        np.max(np.abs(affine.finite_difference_hessian(affine.hessian_potential, rng.normal(size=4)) - printed))
        for _ in range(50)
    )
    ev = np.sort(np.linalg.eigvalsh(affine.hessian_matrix()))
    ev_ok = bool(np.allclose(ev, [-1, 1, 1, 1], atol=1e-12, rtol=0))
    gap = max(affine.hessian_metric_gap(random_group_point(rng)) for _ in range(20))
    ok = exact and fd <= 1e-5 and ev_ok
    report("AC10", ok, f"printed matrix exact: {exact}, finite differences {_fmt(fd)} (tol 1e-5), "
                       f"eigenvalues {ev.tolist()}; WARN pointwise Hess-vs-k+ gap {_fmt(gap)}")
    assert ok


def test_ac11_causal_structure(report):
    rng = np.random.default_rng(11)
    pairs = mism = 0
    while pairs < 500:
        u, v = AlgebraVector(rng.normal(size=4)), AlgebraVector(rng.normal(size=4))
        if classify(u) is CausalType.TIMELIKE and classify(v) is CausalType.TIMELIKE:
            pairs += 1
            mism += same_timecone(u, v) != (in_timecone_e1(u) is in_timecone_e1(v))
    combos = convex_fail = 0
    while combos < 500:
        u, v = AlgebraVector(rng.normal(size=4)), AlgebraVector(rng.normal(size=4))
        if classify(u) is CausalType.TIMELIKE and in_timecone_e1(u) is in_timecone_e1(v):
            combos += 1
            convex_fail += not timecone_convexity_check(u, v, rng.uniform())
    q_gap = max(abs(quadratic_form(u) - 2 * k_form(u, u)) for u in rng.normal(size=(500, 4)))
    ok = mism == 0 and convex_fail == 0 and q_gap <= 1e-12
    report("AC11", ok, f"timecone mismatches {mism}/500, convexity failures {convex_fail}/500, "
                       f"|q - 2k(u,u)| {_fmt(q_gap)} (tol 1e-12)")
    assert ok
