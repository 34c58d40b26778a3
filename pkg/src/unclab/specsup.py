"""Sup-concentration via Hermitian concentration matrices.

For polynomials of degree ``<= n`` on an arc union, ``M[l, m] = t_{m-l} / (2 pi)``
(arc moments ``t``) satisfies ``v^H M v = concentration(P_v, Omega)`` for a unit
coefficient vector ``v``; the top eigenvalue is the sup-concentration.  The
continuous analogue is the Nystrom matrix ``sqrt(w_j w_k) K(w_k - w_j)`` on a
Gauss-Legendre band grid.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bandlimited import gauss_legendre
from .circlepoly import _hermitian_toeplitz, arc_moments
from .errors import ConvergenceError, DomainError
from .setlib import TWO_PI, ArcUnion, random_union, symmetric_interval_arcs

EIGEN_TOL = 1e-10
EIGEN_MAX_ITER = 100_000
_IMPROVE_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class ConcMatrix:
    entries: np.ndarray
    origin: dict

    @property
    def dim(self):
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class EigenResult:
    lam: float
    vector: np.ndarray
    residual: float
    iterations: int


def circle_conc_matrix(omega, n):
    if n < 0:
        raise DomainError("degree must be nonnegative")
    t = arc_moments(omega, n) / TWO_PI
    # _hermitian_toeplitz gives T[l, m] = t_{l-m}; the transpose puts t_{m-l} at (l, m)
    m = np.ascontiguousarray(_hermitian_toeplitz(t).T)
    return ConcMatrix(m, {"kind": "circle", "omega": omega.to_json(), "degree": int(n)})


def continuous_conc_matrix(tset, W, N):
    if not W > 0.0 or N < 2:
        raise DomainError("need W > 0 and N >= 2")
    nodes, weights = gauss_legendre(-0.5 * W, 0.5 * W, N)
    if len(tset) == 0:
        m = np.zeros((N, N), dtype=complex)
    else:
        k = kernels.time_kernel_matrix(nodes, tset.starts, tset.ends)
        sw = np.sqrt(weights)
        m = sw[:, None] * k * sw[None, :]
    origin = {"kind": "continuous", "tset": tset.to_json(), "W": float(W), "N": int(N)}
    return ConcMatrix(np.ascontiguousarray(m), origin)


def _start_vector(dim):
    # fixed complex start; a real uniform start can be orthogonal to the top
    # eigenvector of symmetric configurations
    rng = np.random.default_rng(20240611)
    v = 1.0 + 0.5 * rng.uniform(-1.0, 1.0, dim) + 0.5j * rng.uniform(-1.0, 1.0, dim)
    return v.astype(complex)


# plain power steps before switching to repeated squaring of (M + I) / 2
_PLAIN_STEPS = 2000
_MAX_SQUARINGS = 64


def _residual(mat, v):
    mv = mat @ v
    lam = float(np.real(np.vdot(v, mv)))
    return lam, float(np.linalg.norm(mv - lam * v))


def _squaring_power(mat, v0, tol):
    # v_k = B^(2^k) v0 with B = (M + I) / 2: 2^k power steps per squaring, so
    # clustered top eigenvalues separate in a few dozen matrix products
    b = 0.5 * (mat + np.eye(mat.shape[0]))
    v = v0 / np.linalg.norm(v0)
    best = (np.inf, 0.0, v)
    for k in range(_MAX_SQUARINGS):
        w = b @ v
        v = w / np.linalg.norm(w)
        lam, res = _residual(mat, v)
        if res < best[0]:
            best = (res, lam, v)
        if res < tol:
            return lam, v, res, k
        b = b @ b
        b /= np.abs(b).max()
    return best[1], best[2], best[0], -1


def top_eigenpair(m, tol=EIGEN_TOL, max_iter=EIGEN_MAX_ITER):
    """Dominant eigenpair by power iteration on ``M + I``.

    After ``min(max_iter, 2000)`` plain steps the iteration switches to
    repeated squaring of ``(M + I) / 2``, which reaches the residual
    tolerance when the top of the spectrum is tightly clustered.  The phase
    is fixed by making the largest-modulus entry real positive.
    """
    mat = m.entries if isinstance(m, ConcMatrix) else np.asarray(m, dtype=complex)
    mat = np.ascontiguousarray(mat, dtype=complex)
    if mat.shape[0] < 1:
        raise DomainError("empty matrix")
    v0 = _start_vector(mat.shape[0])
    lam, v, res, it = kernels.power_iteration(mat, v0, tol, min(max_iter, _PLAIN_STEPS))
    if it < 0 and max_iter > _PLAIN_STEPS:
        lam, v, res, k = _squaring_power(mat, v, tol)
        it = -1 if k < 0 else _PLAIN_STEPS + 2**k
    if it < 0:
        raise ConvergenceError(f"power iteration did not reach residual {tol:g}", res)
    j = int(np.argmax(np.abs(v)))
    v = v * (abs(v[j]) / v[j])
    return EigenResult(float(lam), v, float(res), int(it))


def sup_concentration(omega, n):
    return top_eigenpair(circle_conc_matrix(omega, n)).lam


def _arcs_from_layout(centers, lengths):
    return ArcUnion([(c - 0.5 * ln, c + 0.5 * ln) for c, ln in zip(centers, lengths)])


def _valid(omega, total):
    return abs(omega.measure - total) <= 1e-12 * max(1.0, total)


def search_extremal_set(n, delta, r_max, budget, seed):
    """Random-restart local search for the arc union maximising sup-concentration.

    Every candidate has measure ``2 delta`` and at most ``r_max`` arcs;
    ``budget`` counts sup-concentration evaluations.  Returns
    ``(best_set, best_lambda, gap)`` with ``gap = best_lambda - lambda(interval)``.
    """
    if budget < 0 or r_max < 1:
        raise DomainError("need budget >= 0 and r_max >= 1")
    total = 2.0 * delta
    interval = symmetric_interval_arcs(delta)
    lam_interval = sup_concentration(interval, n)
    best_set, best_lam = interval, lam_interval
    if budget == 0:
        return best_set, best_lam, 0.0
    rng = np.random.default_rng(seed)
    spent = 0
    per_restart = max(8, budget // 10)
    while spent < budget:
        r = int(rng.integers(1, r_max + 1)) if total < TWO_PI else 1
        base = random_union(r, total, (0.0, TWO_PI), rng) if total < TWO_PI else None
        if base is None:
            return ArcUnion([(0.0, TWO_PI)]), 1.0, 1.0 - lam_interval
        centers = np.array([0.5 * (a + b) for a, b in base.parts])
        lengths = np.array([b - a for a, b in base.parts])
        cur = _arcs_from_layout(centers, lengths)
        cur_lam = sup_concentration(cur, n)
        spent += 1
        step = 0.5
        local = 0
        while spent < budget and local < per_restart:
            local += 1
            c2, l2 = centers.copy(), lengths.copy()
            i = int(rng.integers(r))
            if r > 1 and rng.random() < 0.5:
                j = int(rng.integers(r - 1))
                j += j >= i
                dl = rng.uniform(-1.0, 1.0) * step * min(l2[i], l2[j])
                l2[i] += dl
                l2[j] -= dl
            else:
                c2[i] += rng.normal() * step
            if np.any(l2 <= 0.0):
                continue
            cand = _arcs_from_layout(c2, l2)
            # overlapping arcs merge and lose measure: reject
            if not _valid(cand, total):
                continue
            lam = sup_concentration(cand, n)
            spent += 1
            if lam > cur_lam + _IMPROVE_EPS:
                centers, lengths, cur, cur_lam = c2, l2, cand, lam
            else:
                step = max(step * 0.8, 1e-4)
        if cur_lam > best_lam + _IMPROVE_EPS:
            best_set, best_lam = cur, cur_lam
    return best_set, best_lam, best_lam - lam_interval


__all__ = [
    "ConcMatrix",
    "EigenResult",
    "circle_conc_matrix",
    "continuous_conc_matrix",
    "search_extremal_set",
    "sup_concentration",
    "top_eigenpair",
]
