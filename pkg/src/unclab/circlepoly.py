"""Exact energies of complex polynomials over unions of arcs of the unit circle.

For ``P(z) = sum_k a_k z^k`` and an arc union ``Omega``::

    int_Omega |P(e^{i theta})|^2 d theta = sum_{l,m} a_l conj(a_m) t_{l-m}

with the arc moments ``t_nu = sum_p (beta_p - alpha_p) e^{i nu (alpha_p+beta_p)/2}
sinc(nu (beta_p - alpha_p)/2)``.  The phase-symmetric sinc form stays
accurate for tiny arcs and covers ``nu = 0`` without a special case.
"""
from dataclasses import dataclass
import math

import numpy as np

from .claims import DEFAULT_TOL, GATE_SLACK, make_report
from .errors import DegenerateInputError, HypothesisError, MalformedInputError, UnclabError
from .kernels import stable_sinc
from .setlib import TWO_PI, ArcUnion, symmetric_interval_arcs


@dataclass(frozen=True, eq=False)
class Poly:
    """Complex polynomial ``a_0 + a_1 z + ... + a_n z^n``.

    Trailing zero coefficients are trimmed unless ``keep_trailing_zeros``;
    the zero polynomial is stored as ``(0,)``.
    """

    coeffs: tuple
    keep_trailing_zeros: bool = False

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).ravel()
        if a.size == 0:
            a = np.zeros(1, dtype=complex)
        if not np.all(np.isfinite(a)):
            raise MalformedInputError("non-finite coefficient")
        if not self.keep_trailing_zeros:
            nz = np.flatnonzero(a)
            a = a[: nz[-1] + 1] if nz.size else a[:1]
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)

    @property
    def degree(self):
        return self.coeffs.size - 1

    def is_zero(self):
        return not np.any(self.coeffs)

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Poly) and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return f"Poly({self.coeffs.tolist()!r})"

    def to_json(self):
        return {"re": self.coeffs.real.tolist(), "im": self.coeffs.imag.tolist()}

    @classmethod
    def from_json(cls, obj):
        try:
            re = np.asarray(obj["re"], dtype=float)
            im = np.asarray(obj.get("im", [0.0] * len(re)), dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInputError(f"bad Poly JSON: {obj!r}") from exc
        if re.shape != im.shape:
            raise MalformedInputError("re/im length mismatch")
        return cls(re + 1j * im)


def arc_moments(omega, nmax):
    """``t_nu = int_Omega e^{i nu theta} d theta`` for ``nu = 0..nmax``."""
    nu = np.arange(nmax + 1, dtype=float)[:, None]
    alpha, beta = omega.starts[None, :], omega.ends[None, :]
    half = 0.5 * (beta - alpha)
    terms = 2.0 * half * np.exp(1j * nu * (alpha + beta) / 2.0) * stable_sinc(nu * half)
    return terms.sum(axis=1)


def _hermitian_toeplitz(t):
    # T[l, m] = t_{l-m} with t_{-nu} = conj(t_nu)
    n = t.size
    d = np.arange(n)[:, None] - np.arange(n)[None, :]
    return np.where(d >= 0, t[np.abs(d)], np.conj(t[np.abs(d)]))


def norm_sq(p):
    """``int_0^{2 pi} |P|^2 = 2 pi sum |a_k|^2``."""
    return TWO_PI * float(np.sum(np.abs(p.coeffs) ** 2))


def arc_energy(p, omega):
    """``int_Omega |P(e^{i theta})|^2 d theta`` in closed form."""
    a = p.coeffs
    tmat = _hermitian_toeplitz(arc_moments(omega, p.degree))
    val = a @ tmat @ np.conj(a)
    if abs(val.imag) > 1e-10 * max(norm_sq(p), 1e-300):
        raise UnclabError(f"arc energy has imaginary residue {val.imag:.3e}")
    return float(val.real)


def concentration(p, omega):
    if p.is_zero():
        raise DegenerateInputError("concentration of the zero polynomial")
    return arc_energy(p, omega) / norm_sq(p)


def modulus_poly(p):
    """Coefficients replaced by their moduli."""
    return Poly(np.abs(p.coeffs), keep_trailing_zeros=True)


def rotate_poly(p, theta):
    """Coefficients ``a_k e^{-i k theta}``.

    ``arc_energy(rotate_poly(p, theta), omega)`` equals
    ``arc_energy(p, omega.rotated(-theta))``.
    """
    k = np.arange(p.coeffs.size)
    return Poly(p.coeffs * np.exp(-1j * k * theta), keep_trailing_zeros=True)


def half_measure(omega):
    return 0.5 * omega.measure


def centred_interval(omega):
    """``(-delta, delta)`` with ``2 delta = |omega|``.

    When ``omega`` already is that interval (up to the rounding of its
    wrap-around split) it is returned unchanged, so that ``P = Q`` on it gives
    identical sides.
    """
    delta = half_measure(omega)
    if len(omega) == 2:
        (a0, b0), (a1, b1) = omega.parts
        if a0 == 0.0 and b1 == TWO_PI and abs((TWO_PI - a1) - b0) <= 4 * np.spacing(TWO_PI):
            return omega
    return symmetric_interval_arcs(delta)


def _gate(n, delta, override, claim):
    if n * delta > math.pi * (1.0 + GATE_SLACK) and not override:
        raise HypothesisError(
            f"{claim}: n*delta = {n * delta:.6g} exceeds pi; pass override=True to explore"
        )


def check_thm_discrete(p, omega, tol=DEFAULT_TOL, override=False):
    """Compare ``int_Omega |P|^2`` with ``int_{(-delta, delta)} |Q|^2``, ``Q`` the modulus polynomial."""
    delta = half_measure(omega)
    _gate(p.degree, delta, override, "thm_discrete")
    lhs = arc_energy(p, omega)
    rhs = arc_energy(modulus_poly(p), centred_interval(omega))
    witness = {"poly": p.to_json(), "omega": omega.to_json(), "override": bool(override)}
    return make_report("thm_discrete", lhs, rhs, tol, witness)


__all__ = [
    "ArcUnion",
    "Poly",
    "arc_energy",
    "arc_moments",
    "check_thm_discrete",
    "concentration",
    "modulus_poly",
    "norm_sq",
    "rotate_poly",
]
