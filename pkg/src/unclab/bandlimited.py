"""Bandlimited functions represented by their spectra on a Gauss-Legendre grid.

A :class:`Spectrum` samples ``fhat`` at quadrature nodes in ``[-W/2, W/2]``.
With ``f(t) = int fhat(w) e^{2 pi i w t} dw`` the energy on a time set is
the quadratic form::

    int_T |f|^2 dt ~= sum_{j,k} w_j w_k conj(fhat_j) fhat_k K(w_k - w_j),
    K(u) = int_T e^{2 pi i u t} dt

which is accurate once the grid resolves the oscillation ``e^{2 pi i w t}``
over the extent of ``T`` (see :func:`min_nodes`).
"""
from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from .claims import GATE_SLACK, make_report
from .errors import (
    DegenerateInputError,
    DomainError,
    HypothesisError,
    MalformedInputError,
    ResolutionError,
    UnclabError,
)
from .setlib import IntervalUnion

CONTINUOUS_TOL = 1e-8
_IMAG_TOL = 1e-8
_BOUND_TOL = 1e-8


def _frozen(x, dtype):
    a = np.array(x, dtype=dtype, copy=True).ravel()
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Quadrature samples of ``fhat`` on ``[-W/2, W/2]``."""

    W: float
    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "W", float(self.W))
        nodes = _frozen(self.nodes, float)
        weights = _frozen(self.weights, float)
        values = _frozen(self.values, complex)
        if not (nodes.size == weights.size == values.size) or nodes.size < 1:
            raise MalformedInputError("nodes, weights and values must have equal nonzero length")
        if not self.W > 0.0:
            raise DomainError("bandwidth W must be positive")
        half = 0.5 * self.W
        if np.any(np.diff(nodes) <= 0.0) or nodes[0] < -half or nodes[-1] > half:
            raise MalformedInputError("nodes must increase strictly inside [-W/2, W/2]")
        if np.any(weights <= 0.0):
            raise MalformedInputError("weights must be positive")
        if not np.all(np.isfinite(values)):
            raise MalformedInputError("non-finite spectral value")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "values", values)

    @property
    def size(self):
        return self.nodes.size

    @property
    def norm_sq(self):
        """Plancherel surrogate ``sum_j w_j |fhat_j|^2``."""
        return float(np.sum(self.weights * np.abs(self.values) ** 2))

    def with_values(self, values):
        return Spectrum(self.W, self.nodes, self.weights, values)

    def to_json(self):
        return {
            "W": self.W,
            "nodes": self.nodes.tolist(),
            "weights": self.weights.tolist(),
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
        }

    @classmethod
    def from_json(cls, obj):
        try:
            values = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
            return cls(obj["W"], obj["nodes"], obj["weights"], values)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, UnclabError):
                raise
            raise MalformedInputError(f"bad Spectrum JSON: {exc}") from exc


def gauss_legendre(lo, hi, n):
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return half * x + 0.5 * (hi + lo), half * w


def _panel_counts(edges, n):
    lengths = np.diff(edges)
    counts = np.maximum(2, np.round(n * lengths / lengths.sum()).astype(int))
    counts[np.argmax(lengths)] += n - counts.sum()
    if np.any(counts < 2):
        raise DomainError(f"{n} nodes cannot cover {lengths.size} panels")
    return counts


def make_spectrum(W, profile, N, breakpoints=None):
    """Sample ``profile`` on an ``N``-node Gauss-Legendre rule over ``[-W/2, W/2]``.

    ``breakpoints`` (interior points where the profile jumps) split the band
    into panels, each with its own Gauss-Legendre rule; nodes are shared out
    in proportion to panel length.  ``profile`` maps an array of frequencies
    to complex values.
    """
    if not W > 0.0:
        raise DomainError("bandwidth W must be positive")
    if N < 2:
        raise DomainError("need at least two nodes")
    half = 0.5 * W
    inner = sorted(float(b) for b in (breakpoints or ()) if -half < b < half)
    edges = np.array([-half, *inner, half])
    nodes, weights = [], []
    for (lo, hi), k in zip(zip(edges[:-1], edges[1:]), _panel_counts(edges, N)):
        x, w = gauss_legendre(lo, hi, int(k))
        nodes.append(x)
        weights.append(w)
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)
    values = np.broadcast_to(np.asarray(profile(nodes), dtype=complex), nodes.shape)
    return Spectrum(W, nodes, weights, values)


def time_kernel(u, tset):
    """``K(u) = int_T e^{2 pi i u t} dt``; ``K(0)`` is the measure of ``T``."""
    out = kernels.time_kernel_numpy(u, tset.starts, tset.ends)
    return complex(out) if np.ndim(out) == 0 else out


def min_nodes(W, tset):
    """Rule-of-thumb node count resolving ``e^{2 pi i w t}`` for ``t`` in ``tset``."""
    if len(tset) == 0:
        return 2
    tmax = max(abs(tset.parts[0][0]), abs(tset.parts[-1][1]))
    return int(math.ceil(0.6 * math.pi * W * tmax)) + 24


def time_energy(s, tset):
    """``int_T |f|^2`` as a quadrature double sum over the spectrum."""
    if len(tset) == 0:
        return 0.0
    v = s.weights * s.values
    val = kernels.time_form(s.nodes, v, tset.starts, tset.ends)
    ns = s.norm_sq
    if abs(val.imag) > _IMAG_TOL * max(ns, 1e-300):
        raise UnclabError(f"time energy has imaginary residue {val.imag:.3e}")
    e = float(val.real)
    if e < -_BOUND_TOL * ns or e > ns * (1.0 + _BOUND_TOL):
        raise ResolutionError(
            f"energy {e:.6g} outside [0, {ns:.6g}]: {s.size} nodes do not resolve a time set "
            f"reaching |t| = {max(abs(tset.parts[0][0]), abs(tset.parts[-1][1])):.3g} "
            f"(try N >= {min_nodes(s.W, tset)})"
        )
    return e


def concentration(s, tset):
    ns = s.norm_sq
    if ns == 0.0:
        raise DegenerateInputError("concentration of the zero spectrum")
    return time_energy(s, tset) / ns


def modulus_spectrum(s):
    """Spectrum of ``g``, the function whose transform is ``|fhat|``."""
    return s.with_values(np.abs(s.values))


def check_thm_main(s, tset, tol=CONTINUOUS_TOL, override=False, claim_id="thm_main_continuous"):
    """Compare ``int_T |f|^2`` with ``int_{-T/2}^{T/2} |g|^2``, ``T = |tset|``.

    ``claim_id`` is ``thm_main_continuous`` or ``thm_finite_continuous``;
    both compute the same two sides on a finite union.
    """
    if claim_id not in ("thm_main_continuous", "thm_finite_continuous"):
        raise ValueError(f"not a continuous claim: {claim_id!r}")
    if s.norm_sq == 0.0:
        raise DegenerateInputError("zero spectrum")
    T = tset.measure
    if s.W * T > 1.0 + GATE_SLACK and not override:
        raise HypothesisError(f"{claim_id}: W*T = {s.W * T:.6g} exceeds 1; pass override=True")
    lhs = time_energy(s, tset)
    rhs = time_energy(modulus_spectrum(s), IntervalUnion([(-0.5 * T, 0.5 * T)]))
    witness = {"spectrum": s.to_json(), "tset": tset.to_json(), "override": bool(override)}
    return make_report(claim_id, lhs, rhs, tol, witness)


__all__ = [
    "Spectrum",
    "check_thm_main",
    "concentration",
    "make_spectrum",
    "min_nodes",
    "modulus_spectrum",
    "time_energy",
    "time_kernel",
]
