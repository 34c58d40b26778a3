"""Central rearrangement of coefficients and the interval energy form.

On the symmetric arc ``(-delta, delta)`` the energy of ``P`` is the Toeplitz
form ``sum_{l,m} a_l conj(a_m) s_{|l-m|}`` with ``s_0 = 2 delta`` and
``s_nu = 2 sin(nu delta) / nu``.  When ``n delta <= pi`` the weights are
nonnegative and decreasing, and among arrangements of nonnegative
coefficients the form is maximised by placing the largest coefficient at the
centre and alternating outwards (right, then left).
"""
from dataclasses import dataclass
import itertools

import numpy as np

from . import kernels
from .circlepoly import Poly, _gate, arc_energy, half_measure
from .claims import DEFAULT_TOL, make_report
from .errors import DegenerateInputError, DomainError, MalformedInputError, SizeGuardError
from .kernels import stable_sinc
from .setlib import symmetric_interval_arcs

BRUTE_FORCE_MAX_LEN = 8
MONTGOMERY_FACTOR = 20.0


@dataclass(frozen=True)
class ToeplitzWeights:
    n: int
    delta: float
    s: tuple

    @property
    def decreasing(self):
        return all(x >= y for x, y in zip(self.s[:-1], self.s[1:])) and self.s[-1] >= 0.0


@dataclass(frozen=True)
class CosineSeries:
    """``f(x) = sum_k a_k cos(k x)``."""

    a: tuple

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        if not a:
            raise MalformedInputError("cosine series needs at least one coefficient")
        object.__setattr__(self, "a", a)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        k = np.arange(len(self.a))
        return np.cos(np.multiply.outer(x, k)) @ np.asarray(self.a)

    def to_json(self):
        return {"a": list(self.a)}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(obj["a"])
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad CosineSeries JSON: {obj!r}") from exc


def central_positions(n):
    """Slots ``0..n`` in the order they receive decreasing values.

    n odd:  ceil(n/2), floor(n/2), ceil(n/2)+1, floor(n/2)-1, ...
    n even: n/2, n/2+1, n/2-1, ...
    """
    c = (n + 1) // 2
    order = [c]
    left, right = c - 1, c + 1
    take_left = n % 2 == 1
    while len(order) < n + 1:
        if take_left and left >= 0:
            order.append(left)
            left -= 1
        elif not take_left and right <= n:
            order.append(right)
            right += 1
        take_left = not take_left
    return order


def hlp_order(coeffs):
    """Centrally ordered permutation of nonnegative ``coeffs`` as a :class:`Poly`.

    Equal values keep their input order.
    """
    x = np.asarray(coeffs, dtype=float).ravel()
    if x.size == 0:
        raise MalformedInputError("empty coefficient list")
    if np.any(x < 0.0) or not np.all(np.isfinite(x)):
        raise DomainError("hlp_order needs finite nonnegative coefficients")
    ranked = np.argsort(-x, kind="stable")
    out = np.empty_like(x)
    out[central_positions(x.size - 1)] = x[ranked]
    return Poly(out, keep_trailing_zeros=True)


def toeplitz_weights(n, delta):
    nu = np.arange(n + 1, dtype=float)
    s = 2.0 * delta * stable_sinc(nu * delta)
    return ToeplitzWeights(int(n), float(delta), tuple(s.tolist()))


def interval_energy_form(p, delta):
    """``int_{-delta}^{delta} |P|^2`` through the real Toeplitz weights."""
    a = p.coeffs
    s = np.asarray(toeplitz_weights(p.degree, delta).s)
    n = a.size
    smat = s[np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])]
    return float(np.real(a @ smat @ np.conj(a)))


def brute_force_best_permutation(coeffs, delta):
    """Exhaustive maximum of the interval energy over all arrangements.

    Returns the first maximiser in ``itertools.permutations`` order and its
    value.
    """
    x = np.asarray(coeffs, dtype=float).ravel()
    if x.size > BRUTE_FORCE_MAX_LEN:
        raise SizeGuardError(f"{x.size} coefficients exceed the guard of {BRUTE_FORCE_MAX_LEN}")
    perms = np.array(list(itertools.permutations(x)), dtype=float)
    s = np.asarray(toeplitz_weights(x.size - 1, delta).s)
    values = kernels.toeplitz_forms(perms, s)
    best = int(np.argmax(values))
    return Poly(perms[best], keep_trailing_zeros=True), float(values[best])


def montgomery_embed(f):
    """Degree-``2n`` symmetric polynomial with ``|f(x)| = |P(e^{ix})|``."""
    a = np.asarray(f.a)
    n = a.size - 1
    k = np.arange(2 * n + 1)
    c = a[np.abs(k - n)] / 2.0
    c = c.astype(complex)
    c[n] = a[0]
    return Poly(c, keep_trailing_zeros=True)


def _symmetric_half(p):
    # (a_0, a_1, ..., a_n) of a symmetric even-degree polynomial, complex allowed
    c = p.coeffs
    if c.size % 2 == 0 or not np.array_equal(c, c[::-1]):
        raise DomainError("expected a symmetric polynomial of even degree")
    n = c.size // 2
    return np.concatenate([[c[n]], 2.0 * c[n + 1:]])


def cosine_from_symmetric(p):
    """Inverse of :func:`montgomery_embed` for real symmetric polynomials."""
    a = _symmetric_half(p)
    if np.any(a.imag != 0.0):
        raise DomainError("cosine series coefficients must be real")
    return CosineSeries(a.real.tolist())


def check_thm_improv(p, omega, tol=DEFAULT_TOL, override=False):
    """Compare ``int_Omega |P|^2`` with the interval energy of the central rearrangement.

    The witness also records ``ratio = lhs / rhs``.
    """
    if p.is_zero():
        raise DegenerateInputError("thm_improv on the zero polynomial")
    delta = half_measure(omega)
    _gate(p.degree, delta, override, "thm_improv")
    lhs = arc_energy(p, omega)
    rhs = interval_energy_form(hlp_order(np.abs(p.coeffs)), delta)
    witness = {
        "poly": p.to_json(),
        "omega": omega.to_json(),
        "override": bool(override),
        "ratio": lhs / rhs,
    }
    return make_report("thm_improv", lhs, rhs, tol, witness)


def montgomery_rearranged(p):
    """``P**``: the symmetric polynomial built from ``|a_k|`` sorted decreasingly."""
    a_star = np.sort(np.abs(_symmetric_half(p)))[::-1]
    return montgomery_embed(CosineSeries(a_star.tolist()))


def check_montgomery20(p, omega, tol=DEFAULT_TOL):
    """Factor-20 inequality for a symmetric even-degree ``P`` (no size hypothesis)."""
    if p.is_zero():
        raise DegenerateInputError("montgomery20 on the zero polynomial")
    delta = half_measure(omega)
    lhs = arc_energy(p, omega)
    rhs = MONTGOMERY_FACTOR * arc_energy(montgomery_rearranged(p), symmetric_interval_arcs(delta))
    witness = {"poly": p.to_json(), "omega": omega.to_json()}
    return make_report("montgomery20", lhs, rhs, tol, witness)


__all__ = [
    "CosineSeries",
    "ToeplitzWeights",
    "brute_force_best_permutation",
    "central_positions",
    "check_montgomery20",
    "check_thm_improv",
    "hlp_order",
    "interval_energy_form",
    "montgomery_embed",
    "toeplitz_weights",
]
