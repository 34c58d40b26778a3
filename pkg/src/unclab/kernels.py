"""Hot numeric kernels with a numba path and a pure-numpy path.

Every kernel ``foo`` is exposed three ways: ``foo_numba`` (compiled loop
code, ``None`` when numba is missing), ``foo_numpy`` (vectorised numpy) and
``foo`` (whichever :data:`unclab._accel.USE_NUMBA` selects).  The two paths
agree to rounding; tests compare them directly.
"""
import numpy as np

from ._accel import HAVE_NUMBA, USE_NUMBA, njit

# Below this |x| the sinc Taylor form 1 - x^2/6 + x^4/120 is used; the
# truncation error is < x^6/5040 < 1e-27.
SINC_TAYLOR_CUTOFF = 1e-4


def stable_sinc(x):
    """sin(x)/x, evaluated without the removable singularity at 0."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    small = np.abs(x) < SINC_TAYLOR_CUTOFF
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)


def _sinc_scalar(x):
    if abs(x) < SINC_TAYLOR_CUTOFF:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return np.sin(x) / x


_sinc_scalar_jit = njit(_sinc_scalar)


# --------------------------------------------------------------------------
# time-set kernel  K(u) = sum_p (b_p - a_p) e^{i pi u (a_p+b_p)} sinc(pi u (b_p - a_p))
# --------------------------------------------------------------------------

def time_kernel_numpy(u, a, b):
    u = np.asarray(u, dtype=float)
    out = np.zeros(u.shape, dtype=complex)
    for ap, bp in zip(a, b):
        ln = bp - ap
        out += ln * np.exp(1j * np.pi * u * (ap + bp)) * stable_sinc(np.pi * u * ln)
    return out


def _kernel_matrix_loops(nodes, a, b):
    n = nodes.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        for k in range(j, n):
            u = nodes[k] - nodes[j]
            acc = 0.0 + 0.0j
            for p in range(a.shape[0]):
                ln = b[p] - a[p]
                ph = np.pi * u * (a[p] + b[p])
                acc += ln * _sinc_scalar_jit(np.pi * u * ln) * (np.cos(ph) + 1j * np.sin(ph))
            out[j, k] = acc
            out[k, j] = np.conj(acc)
    return out


def time_kernel_matrix_numpy(nodes, a, b):
    """Matrix ``K[j, k] = K(nodes[k] - nodes[j])``."""
    nodes = np.asarray(nodes, dtype=float)
    return time_kernel_numpy(nodes[None, :] - nodes[:, None], a, b)


# Rows per block in the numpy quadratic form; bounds memory at O(block * N).
_FORM_BLOCK = 256


def _time_form_loops(nodes, v, a, b):
    # sum_{j,k} conj(v_j) v_k K(nodes[k] - nodes[j]), sequential reduction
    n = nodes.shape[0]
    total = 0.0 + 0.0j
    for j in range(n):
        row = 0.0 + 0.0j
        for k in range(n):
            u = nodes[k] - nodes[j]
            acc = 0.0 + 0.0j
            for p in range(a.shape[0]):
                ln = b[p] - a[p]
                ph = np.pi * u * (a[p] + b[p])
                acc += ln * _sinc_scalar_jit(np.pi * u * ln) * (np.cos(ph) + 1j * np.sin(ph))
            row += acc * v[k]
        total += np.conj(v[j]) * row
    return total


def time_form_numpy(nodes, v, a, b):
    nodes = np.asarray(nodes, dtype=float)
    v = np.asarray(v, dtype=complex)
    total = 0.0 + 0.0j
    for start in range(0, nodes.size, _FORM_BLOCK):
        blk = slice(start, start + _FORM_BLOCK)
        kmat = time_kernel_numpy(nodes[None, :] - nodes[blk, None], a, b)
        total += np.conj(v[blk]) @ (kmat @ v)
    return complex(total)


# --------------------------------------------------------------------------
# batched symmetric Toeplitz forms  E_i = sum_{l,m} x_il x_im s_|l-m|
# --------------------------------------------------------------------------

def _toeplitz_forms_loops(x, s):
    nb, n = x.shape
    out = np.empty(nb)
    for i in range(nb):
        acc = 0.0
        for l in range(n):
            xl = x[i, l]
            if xl == 0.0:
                continue
            acc += xl * xl * s[0]
            for m in range(l + 1, n):
                acc += 2.0 * xl * x[i, m] * s[m - l]
        out[i] = acc
    return out


def toeplitz_forms_numpy(x, s):
    x = np.asarray(x, dtype=float)
    n = x.shape[1]
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    smat = np.asarray(s, dtype=float)[idx]
    return np.einsum("il,lm,im->i", x, smat, x)


# --------------------------------------------------------------------------
# shifted power iteration on a Hermitian matrix
# --------------------------------------------------------------------------

def _power_loops(m, v0, tol, max_iter):
    # returns (lambda, vector, residual, iterations); iterations = -1 on cap
    v = v0 / np.sqrt(np.sum(np.abs(v0) ** 2))
    lam = 0.0
    res = np.inf
    for it in range(max_iter):
        mv = m @ v
        lam = np.real(np.vdot(v, mv))
        r = mv - lam * v
        res = np.sqrt(np.sum(np.abs(r) ** 2))
        if res < tol:
            return lam, v, res, it
        w = mv + v  # (M + I) v
        v = w / np.sqrt(np.sum(np.abs(w) ** 2))
    return lam, v, res, -1


power_iteration_numpy = _power_loops


# --------------------------------------------------------------------------
# constrained ascent on h = |sum_p e^{iB_p} - e^{iA_p}|^2
# free variables x = (A_1..A_r, B_1..B_{r-1}); B_r = A_r + L - sum_{p<r}(B_p - A_p)
# --------------------------------------------------------------------------

def _build_ascent(jit):
    def expand(x, r, L):
        a = x[:r].copy()
        b = np.empty(r)
        acc = 0.0
        for p in range(r - 1):
            b[p] = x[r + p]
            acc += b[p] - a[p]
        b[r - 1] = a[r - 1] + L - acc
        return a, b

    expand = jit(expand)

    def h_and_grad(x, r, L):
        a, b = expand(x, r, L)
        zr = np.sum(np.cos(b)) - np.sum(np.cos(a))
        zi = np.sum(np.sin(b)) - np.sum(np.sin(a))
        h = zr * zr + zi * zi
        # dh/dB_p = 2(-zr sin B_p + zi cos B_p); dh/dA_p = 2(zr sin A_p - zi cos A_p)
        gb = 2.0 * (-zr * np.sin(b) + zi * np.cos(b))
        ga = 2.0 * (zr * np.sin(a) - zi * np.cos(a))
        g = np.empty(2 * r - 1)
        last = gb[r - 1]
        for p in range(r):
            g[p] = ga[p] + last  # dB_r/dA_p = +1
        for p in range(r - 1):
            g[r + p] = gb[p] - last  # dB_r/dB_p = -1
        return h, g

    h_and_grad = jit(h_and_grad)

    def ascend(x0, r, L, step, max_iter, gtol):
        x = x0.copy()
        h, g = h_and_grad(x, r, L)
        for _ in range(max_iter):
            if np.sqrt(np.sum(g * g)) < gtol:
                break
            t = step
            moved = False
            while t > 1e-12:
                xn = x + t * g
                hn, gn = h_and_grad(xn, r, L)
                if hn > h:
                    x, h, g = xn, hn, gn
                    moved = True
                    break
                t *= 0.5
            if not moved:
                break
        return x, h

    return jit(ascend)


ascend_h_numpy = _build_ascent(lambda f: f)


if HAVE_NUMBA:
    time_kernel_matrix_numba = njit(_kernel_matrix_loops)
    time_form_numba = njit(_time_form_loops)
    toeplitz_forms_numba = njit(_toeplitz_forms_loops)
    power_iteration_numba = njit(_power_loops)
    ascend_h_numba = _build_ascent(njit)
else:  # pragma: no cover - depends on the environment
    time_kernel_matrix_numba = None
    time_form_numba = None
    toeplitz_forms_numba = None
    power_iteration_numba = None
    ascend_h_numba = None


if USE_NUMBA:
    time_kernel_matrix = time_kernel_matrix_numba
    time_form = time_form_numba
    toeplitz_forms = toeplitz_forms_numba
    power_iteration = power_iteration_numba
    ascend_h = ascend_h_numba
else:
    time_kernel_matrix = time_kernel_matrix_numpy
    time_form = time_form_numpy
    toeplitz_forms = toeplitz_forms_numpy
    power_iteration = power_iteration_numpy
    ascend_h = ascend_h_numpy
