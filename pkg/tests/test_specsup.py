import math

import numpy as np
import pytest

from oracles import charpoly_top_root, prolate_top_eigenvalue
from unclab.bandlimited import make_spectrum, time_energy
from unclab.circlepoly import Poly, concentration
from unclab.errors import ConvergenceError, DomainError
from unclab.setlib import FULL_CIRCLE, ArcUnion, IntervalUnion, random_arc_union, symmetric_interval_arcs
from unclab.specsup import (
    circle_conc_matrix,
    continuous_conc_matrix,
    search_extremal_set,
    sup_concentration,
    top_eigenpair,
)

PI = math.pi
ANTIPODAL_ARCS = ArcUnion([(-PI / 8, PI / 8), (7 * PI / 8, 9 * PI / 8)])
# time-domain sinc-kernel discretisation, stable to 1e-14 for n = 100..400
PROLATE_WT1 = 0.78336878921
# largest root of the characteristic polynomial of the 3x3 interval matrix
INTERVAL_3X3 = 0.6576837921494739


def test_circle_matrix_examples():
    d = 0.8
    m = circle_conc_matrix(symmetric_interval_arcs(d), 0).entries
    assert m.shape == (1, 1) and m[0, 0] == pytest.approx(d / PI, abs=1e-15)
    m = circle_conc_matrix(symmetric_interval_arcs(d), 1).entries
    ref = np.array([[d, math.sin(d)], [math.sin(d), d]]) / PI
    assert np.allclose(m, ref, atol=1e-15)
    assert np.allclose(circle_conc_matrix(FULL_CIRCLE, 4).entries, np.eye(5), atol=1e-15)
    with pytest.raises(DomainError):
        circle_conc_matrix(FULL_CIRCLE, -1)


def test_rayleigh_is_concentration():
    rng = np.random.default_rng(1)
    for _ in range(200):
        n = int(rng.integers(0, 9))
        omega = random_arc_union(1 + n % 3, rng.uniform(0.1, 5), rng)
        m = circle_conc_matrix(omega, n).entries
        v = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        rq = np.real(np.vdot(v, m @ v)) / np.real(np.vdot(v, v))
        assert rq == pytest.approx(concentration(Poly(v, keep_trailing_zeros=True), omega), abs=1e-10)


def test_hermitian():
    rng = np.random.default_rng(2)
    m = circle_conc_matrix(random_arc_union(3, 2.0, rng), 10).entries
    assert np.abs(m - m.conj().T).max() <= 1e-14
    c = continuous_conc_matrix(IntervalUnion([(-1, 0.3), (2, 2.5)]), 1.5, 40).entries
    assert np.abs(c - c.conj().T).max() <= 1e-14


def test_top_eigenpair_examples():
    d = 0.6
    r = top_eigenpair(np.array([[d / PI]]))
    assert r.lam == pytest.approx(d / PI, abs=1e-15)
    r = top_eigenpair(circle_conc_matrix(symmetric_interval_arcs(d), 1))
    assert r.lam == pytest.approx((d + math.sin(d)) / PI, abs=1e-10)
    assert r.residual < 1e-10
    assert np.linalg.norm(r.vector) == pytest.approx(1.0, abs=1e-12)
    r = top_eigenpair(np.eye(4))
    assert r.lam == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(DomainError):
        top_eigenpair(np.zeros((0, 0)))


def test_convergence_error_carries_residual():
    # eigenvalues 1 and 1 - 1e-9 with a rotated basis: no convergence in 3 steps
    q = np.linalg.qr(np.random.default_rng(0).normal(size=(2, 2)))[0]
    m = q @ np.diag([0.5, 0.5 - 1e-9]) @ q.T
    with pytest.raises(ConvergenceError) as exc:
        top_eigenpair(m, max_iter=3)
    assert exc.value.best_residual > 0


def test_sup_examples():
    for d in (0.1, 1.0, PI):
        assert sup_concentration(symmetric_interval_arcs(d), 1) == pytest.approx((d + math.sin(d)) / PI, abs=1e-10)
    assert sup_concentration(FULL_CIRCLE, 3) == pytest.approx(1.0, abs=1e-12)
    lam_antipodal = sup_concentration(ANTIPODAL_ARCS, 2)
    lam_int = sup_concentration(symmetric_interval_arcs(PI / 4), 2)
    assert lam_antipodal == pytest.approx((PI + 2 * math.sqrt(2)) / (4 * PI), abs=1e-10)
    assert lam_int == pytest.approx(INTERVAL_3X3, abs=1e-10)
    t = [1 / 4, math.sin(PI / 4) / PI, 1 / (2 * PI)]
    assert charpoly_top_root([[t[abs(i - j)] for j in range(3)] for i in range(3)]) == pytest.approx(INTERVAL_3X3, abs=1e-12)
    assert lam_int > lam_antipodal


def test_eigen_layer_properties():
    rng = np.random.default_rng(3)
    for _ in range(30):
        n = int(rng.integers(0, 10))
        omega = random_arc_union(int(rng.integers(1, 4)), rng.uniform(0.05, 6.0), rng)
        m = circle_conc_matrix(omega, n)
        r = top_eigenpair(m)
        assert r.residual < 1e-10
        assert omega.measure / (2 * PI) - 1e-9 <= r.lam <= 1 + 1e-9
        v = rng.normal(size=(1000, n + 1)) + 1j * rng.normal(size=(1000, n + 1))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        rq = np.real(np.einsum("ij,jk,ik->i", v.conj(), m.entries, v))
        assert rq.max() <= r.lam + 1e-9
        for row in v[:20]:
            assert r.lam >= concentration(Poly(row, keep_trailing_zeros=True), omega) - 1e-9


def test_continuous_matrix_examples():
    c = continuous_conc_matrix(IntervalUnion([]), 1.0, 8).entries
    assert not np.any(c)
    r = top_eigenpair(continuous_conc_matrix(IntervalUnion([(-10, 10)]), 1.0, 128))
    assert abs(r.lam - 1) < 1e-3 and r.residual < 1e-10
    lam = top_eigenpair(continuous_conc_matrix(IntervalUnion([(-0.5, 0.5)]), 1.0, 256)).lam
    assert lam == pytest.approx(PROLATE_WT1, abs=1e-10)
    assert prolate_top_eigenvalue(1.0, 1.0, 200) == pytest.approx(PROLATE_WT1, abs=1e-10)


def test_continuous_rayleigh_matches_energy():
    t = IntervalUnion([(-1.2, -0.4), (0.3, 0.9)])
    s = make_spectrum(1.0, lambda w: np.ones_like(w), 64)
    m = continuous_conc_matrix(t, 1.0, 64).entries
    v = np.sqrt(s.weights) * s.values
    rq = np.real(np.vdot(v, m @ v)) / np.real(np.vdot(v, v))
    assert rq == pytest.approx(time_energy(s, t) / s.norm_sq, abs=1e-8)


def test_search_examples():
    best, lam, gap = search_extremal_set(2, 0.5, 3, 0, 1)
    assert best == symmetric_interval_arcs(0.5) and gap == 0.0
    best, lam, gap = search_extremal_set(2, PI / 4, 2, 1000, 3)
    assert abs(best.measure - PI / 2) <= 1e-12
    assert gap <= 1e-9
    for seed in range(3):
        _, _, gap = search_extremal_set(1, 1.0, 3, 150, seed)
        assert gap <= 1e-9
