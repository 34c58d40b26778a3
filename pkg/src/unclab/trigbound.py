"""The trigonometric sum ``h(A, B) = |sum_p e^{iB_p} - e^{iA_p}|^2`` and its claimed bound.

Also the residue-class diagnostics for maximising ``|sum_i sin x_i|`` under a
fixed sum ``sum_i x_i = L``.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from .claims import make_report
from .errors import DomainError, MalformedInputError
from .setlib import TWO_PI

# fixed ascent hyperparameters
ASCENT_STEP = 0.1
ASCENT_ITERS = 500
ASCENT_GTOL = 1e-10

SIN_CLUSTER_TOL = 1e-9


@dataclass(frozen=True)
class TrigConfig:
    """Endpoints ``A_p < B_p`` (not enforced) with ``L = sum_p (B_p - A_p)``."""

    A: tuple
    B: tuple

    def __post_init__(self):
        a = tuple(float(x) for x in self.A)
        b = tuple(float(x) for x in self.B)
        if len(a) != len(b) or not a:
            raise MalformedInputError("A and B must be nonempty and of equal length")
        if not all(math.isfinite(x) for x in a + b):
            raise MalformedInputError("non-finite angle")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)

    @property
    def r(self):
        return len(self.A)

    @property
    def L(self):
        return math.fsum(self.B) - math.fsum(self.A)

    def shifted(self, s):
        return TrigConfig([x + s for x in self.A], [x + s for x in self.B])

    def to_json(self):
        return {"A": list(self.A), "B": list(self.B)}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(obj["A"], obj["B"])
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad TrigConfig JSON: {obj!r}") from exc


def h_value(c):
    a, b = np.asarray(c.A), np.asarray(c.B)
    s = np.sum(np.sin(b)) - np.sum(np.sin(a))
    co = np.sum(np.cos(b)) - np.sum(np.cos(a))
    return float(s * s + co * co)


def h_modulus(c):
    """Same quantity as :func:`h_value`, via the complex sum."""
    z = np.sum(np.exp(1j * np.asarray(c.B))) - np.sum(np.exp(1j * np.asarray(c.A)))
    return float(abs(z) ** 2)


def claimed_bound(L):
    return 4.0 * math.sin(0.5 * L) ** 2


def canonical_point(r, L, A=0.0):
    """``(A, ..., A, A + L)``: every pair empty except the last."""
    return TrigConfig([A] * r, [A] * (r - 1) + [A + L])


def check_lemma_h(c, tol=1e-10):
    witness = c.to_json()
    return make_report("lemma_h_bound", h_value(c), claimed_bound(c.L), tol, witness)


def _to_free(c):
    return np.array(list(c.A) + list(c.B[:-1]), dtype=float)


def _from_free(x, r, L):
    a = x[:r]
    b = np.empty(r)
    b[: r - 1] = x[r:]
    b[r - 1] = a[r - 1] + L - np.sum(b[: r - 1] - a[: r - 1])
    return TrigConfig(a.tolist(), b.tolist())


def multistart_max_h(r, L, restarts, seed):
    """Best ``h`` found by gradient ascent on the surface ``sum (B - A) = L``.

    Restart 0 starts at the canonical point, the others at seeded uniform
    angles in ``[0, 2 pi)``.  ``B_r`` is eliminated, so every iterate is
    exactly feasible.  Returns ``(config, value)``; the value is reported as
    found, even when it exceeds :func:`claimed_bound`.
    """
    if r < 1 or restarts < 1:
        raise DomainError("need r >= 1 and restarts >= 1")
    rng = np.random.default_rng(seed)
    best_x, best_h = None, -math.inf
    for k in range(restarts):
        if k == 0:
            x0 = _to_free(canonical_point(r, L))
        else:
            x0 = rng.uniform(0.0, TWO_PI, size=2 * r - 1)
        x, h = kernels.ascend_h(x0, r, float(L), ASCENT_STEP, ASCENT_ITERS, ASCENT_GTOL)
        if h > best_h:
            best_x, best_h = x, h
    best = _from_free(np.asarray(best_x), r, float(L))
    return best, h_value(best)


def residue_clusters(x, tol):
    """Number of clusters of ``x mod 2 pi`` when points within ``tol`` (circularly) are joined."""
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    y = np.sort(np.mod(np.asarray(x, dtype=float), TWO_PI))
    if y.size == 0:
        return 0
    gaps = np.diff(np.concatenate([y, [y[0] + TWO_PI]]))
    breaks = int(np.sum(gaps > tol))
    return max(breaks, 1)


def _two_class_values(n, L, k, y):
    # k copies of y and n-k copies of y' with k y + (n-k) y' = L + 2 pi m, |m| <= n
    y = np.asarray(y, dtype=float)
    if k == n:
        m = np.arange(-n, n + 1)
        return np.abs(n * np.sin((L + TWO_PI * m) / n))
    m = np.arange(-n, n + 1)[:, None]
    yp = (L + TWO_PI * m - k * y[None, :]) / (n - k)
    return np.abs(k * np.sin(y)[None, :] + (n - k) * np.sin(yp))


def max_sum_sin_reduced(n, L, grid):
    """Max of ``|sum sin x_i|`` over configurations with at most two residue classes.

    Dense grid over the first class angle ``y`` for each class size ``k``,
    then a bounded scalar refinement around the best grid point.
    """
    from scipy.optimize import minimize_scalar

    if n < 1 or grid < 100:
        raise DomainError("need n >= 1 and grid >= 100")
    ys = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    h = TWO_PI / grid
    best = 0.0
    for k in range(n + 1):
        vals = _two_class_values(n, L, k, ys)
        best = max(best, float(vals.max()))
        if k in (0, n):
            continue
        i = int(np.argmax(vals.max(axis=0)))
        res = minimize_scalar(
            lambda t: -float(_two_class_values(n, L, k, [t]).max()),
            bounds=(ys[i] - h, ys[i] + h),
            method="bounded",
            options={"xatol": 1e-12},
        )
        best = max(best, -float(res.fun))
    return best


def check_lemma_sin_cluster(x, grid=2000, tol=1e-9):
    """``|sum sin x_i|`` against the two-class maximum at the same ``L``."""
    x = [float(v) for v in x]
    n = len(x)
    lhs = abs(math.fsum(math.sin(v) for v in x))
    rhs = max_sum_sin_reduced(n, math.fsum(x), grid)
    return make_report("lemma_sin_cluster", lhs, rhs, tol, {"x": x, "grid": int(grid)})


__all__ = [
    "TrigConfig",
    "canonical_point",
    "check_lemma_h",
    "check_lemma_sin_cluster",
    "claimed_bound",
    "h_modulus",
    "h_value",
    "max_sum_sin_reduced",
    "multistart_max_h",
    "residue_clusters",
]
