"""Time the numba kernels against their numpy counterparts.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is called once before timing so numba compilation is excluded.
The script also checks that both paths return the same values.
"""
import argparse
import itertools
import timeit

import numpy as np

from unclab import kernels
from unclab._accel import HAVE_NUMBA


def _cases():
    rng = np.random.default_rng(0)
    a = np.array([-0.25, 1.77])
    b = np.array([0.25, 2.27])
    for n in (200, 800):
        nodes = np.sort(rng.uniform(-0.25, 0.25, n))
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        yield f"time_form N={n}", "time_form", (nodes, v, a, b)
    nodes = np.sort(rng.uniform(-0.5, 0.5, 300))
    yield "time_kernel_matrix N=300", "time_kernel_matrix", (nodes, a, b)
    perms = np.array(list(itertools.permutations(rng.uniform(0, 1, 7))))
    s = 2 * 0.3 * np.sinc(np.arange(7) * 0.3 / np.pi)
    yield f"toeplitz_forms {len(perms)}x7", "toeplitz_forms", (perms, s)
    q = rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64))
    m = q @ q.conj().T
    m /= np.linalg.eigvalsh(m)[-1]
    yield "power_iteration dim=64", "power_iteration", (m + np.eye(64), np.ones(64, complex), 1e-10, 5000)
    yield "ascend_h r=4", "ascend_h", (rng.uniform(0, 6, 7), 4, 2.0, 0.1, 500, 1e-10)


def _same(x, y):
    if isinstance(x, tuple):
        return all(_same(p, q) for p, q in zip(x, y))
    return np.allclose(x, y, rtol=1e-10, atol=1e-12)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy path is available")
    print(f"{'kernel':<28s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}  agree")
    for label, name, call_args in _cases():
        f_np = getattr(kernels, f"{name}_numpy")
        f_nb = getattr(kernels, f"{name}_numba")
        ref = f_np(*call_args)
        t_np = min(timeit.repeat(lambda: f_np(*call_args), number=1, repeat=args.repeat)) * 1e3
        if f_nb is None:
            print(f"{label:<28s} {t_np:10.3f} {'-':>10s} {'-':>8s}  -")
            continue
        out = f_nb(*call_args)
        t_nb = min(timeit.repeat(lambda: f_nb(*call_args), number=1, repeat=args.repeat)) * 1e3
        print(f"{label:<28s} {t_np:10.3f} {t_nb:10.3f} {t_np / t_nb:8.1f}  {_same(out, ref)}")


if __name__ == "__main__":
    main()
