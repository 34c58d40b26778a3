"""Finite unions of intervals on the line and of arcs on the circle.

Both types are stored canonically: half-open parts, sorted, pairwise
disjoint, with touching parts merged and empty parts dropped.  Arcs live in
``[0, 2*pi)``; an arc crossing ``0`` is stored as two parts.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import InfeasibleRequestError, MalformedInputError

TWO_PI = 2.0 * math.pi


def _merge(pairs):
    out = []
    for a, b in sorted(p for p in pairs if p[1] > p[0]):
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return tuple(out)


def _check_finite(raw):
    pairs = []
    for item in raw:
        a, b = (float(v) for v in item)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise MalformedInputError(f"non-finite endpoint in {item!r}")
        if a > b:
            raise MalformedInputError(f"reversed pair {item!r}")
        pairs.append((a, b))
    return pairs


@dataclass(frozen=True)
class IntervalUnion:
    """Canonical disjoint union of half-open real intervals ``[a, b)``."""

    parts: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "parts", _merge(_check_finite(self.parts)))

    @property
    def measure(self):
        return math.fsum(b - a for a, b in self.parts)

    @property
    def starts(self):
        return np.array([a for a, _ in self.parts], dtype=float)

    @property
    def ends(self):
        return np.array([b for _, b in self.parts], dtype=float)

    def __len__(self):
        return len(self.parts)

    def shifted(self, s):
        return IntervalUnion([(a + s, b + s) for a, b in self.parts])

    def to_json(self):
        return {"parts": [[a, b] for a, b in self.parts]}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(obj["parts"])
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad IntervalUnion JSON: {obj!r}") from exc


@dataclass(frozen=True)
class ArcUnion:
    """Canonical disjoint union of arcs ``[alpha, beta)`` inside ``[0, 2*pi)``.

    Input arcs may use any real angles; they are reduced modulo ``2*pi`` and
    split at ``0`` when they wrap.  An input arc of length ``>= 2*pi`` yields
    the full circle.
    """

    parts: tuple = ()

    def __post_init__(self):
        pieces = []
        for a, b in _check_finite(self.parts):
            length = b - a
            if length <= 0.0:
                continue
            if length >= TWO_PI:
                pieces = [(0.0, TWO_PI)]
                break
            a0 = math.fmod(a, TWO_PI)
            if a0 < 0.0:
                a0 += TWO_PI
            if a0 >= TWO_PI:
                a0 = 0.0
            b0 = a0 + length
            if b0 > TWO_PI:
                pieces.append((a0, TWO_PI))
                pieces.append((0.0, b0 - TWO_PI))
            else:
                pieces.append((a0, b0))
        object.__setattr__(self, "parts", _merge(pieces))

    @property
    def measure(self):
        return math.fsum(b - a for a, b in self.parts)

    @property
    def starts(self):
        return np.array([a for a, _ in self.parts], dtype=float)

    @property
    def ends(self):
        return np.array([b for _, b in self.parts], dtype=float)

    def __len__(self):
        return len(self.parts)

    def rotated(self, theta):
        """The set ``Omega + theta``."""
        return ArcUnion([(a + theta, b + theta) for a, b in self.parts])

    def to_json(self):
        return {"arcs": [[a, b] for a, b in self.parts]}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(obj["arcs"])
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad ArcUnion JSON: {obj!r}") from exc


FULL_CIRCLE = ArcUnion([(0.0, TWO_PI)])


def symmetric_interval_arcs(delta):
    """The arc ``(-delta, delta)``."""
    return ArcUnion([(-delta, delta)])


def normalize_intervals(raw):
    """Canonicalise a list of ``(a, b)`` pairs into an :class:`IntervalUnion`."""
    return IntervalUnion(raw)


def measure(u):
    return u.measure


def _boolean(u, v, keep):
    # sweep over elementary segments; keep(in_u, in_v) decides membership
    cuts = sorted({x for p in u.parts + v.parts for x in p})
    out = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (lo + hi)
        in_u = any(a <= mid < b for a, b in u.parts)
        in_v = any(a <= mid < b for a, b in v.parts)
        if keep(in_u, in_v):
            out.append((lo, hi))
    return type(u)(out)


def symmetric_difference(u, v):
    return _boolean(u, v, lambda x, y: x != y)


def union(u, v):
    return _boolean(u, v, lambda x, y: x or y)


def intersection(u, v):
    return _boolean(u, v, lambda x, y: x and y)


def from_indicator(samples):
    """Intervals from a sampled indicator.

    Each maximal run of ``inside`` samples becomes ``[t_first, t_next)``
    where ``t_next`` is the first sample after the run (or the run's last
    sample if the run reaches the end).
    """
    samples = [(float(t), bool(flag)) for t, flag in samples]
    if len(samples) < 2:
        raise MalformedInputError("need at least two samples")
    ts = [t for t, _ in samples]
    if any(not math.isfinite(t) for t in ts):
        raise MalformedInputError("non-finite sample position")
    if any(t1 <= t0 for t0, t1 in zip(ts[:-1], ts[1:])):
        raise MalformedInputError("samples must be strictly increasing in t")
    parts = []
    start = None
    for i, (t, inside) in enumerate(samples):
        if inside and start is None:
            start = t
        elif not inside and start is not None:
            parts.append((start, t))
            start = None
    if start is not None:
        parts.append((start, ts[-1]))
    return IntervalUnion(parts)


def random_union(r, total, window, seed):
    """Seeded union of exactly ``r`` disjoint intervals of total length ``total``.

    Part lengths and the ``r + 1`` surrounding gaps are drawn as uniform
    fractions in ``[0.1, 1]`` and rescaled to ``total`` and to the window's
    slack respectively.  ``seed`` may be an int or a ``numpy`` Generator.
    """
    lo, hi = (float(x) for x in window)
    width = hi - lo
    if r < 1 or not total > 0.0 or not width > 0.0:
        raise InfeasibleRequestError(f"bad request r={r}, total={total}, window={window}")
    slack = width - total
    if slack < 0.0 or (slack <= 0.0 and r > 1):
        raise InfeasibleRequestError(
            f"window of width {width} cannot host {r} disjoint parts of total {total}"
        )
    rng = np.random.default_rng(seed)
    lengths = rng.uniform(0.1, 1.0, size=r)
    lengths *= total / lengths.sum()
    gaps = rng.uniform(0.1, 1.0, size=r + 1)
    gaps *= slack / gaps.sum()
    parts = []
    pos = lo + gaps[0]
    for k in range(r):
        parts.append((pos, pos + lengths[k]))
        pos += lengths[k] + gaps[k + 1]
    out = IntervalUnion(parts)
    if len(out) != r:  # pragma: no cover - gaps are bounded away from 0
        raise InfeasibleRequestError("parts merged; window too tight")
    return out


def random_arc_union(r, total, seed):
    """Seeded union of ``r`` disjoint arcs (total length ``total``) at a random rotation.

    The wrap-around split at ``0`` may store one arc as two parts.
    """
    rng = np.random.default_rng(seed)
    base = random_union(r, total, (0.0, TWO_PI), rng)
    return ArcUnion(base.parts).rotated(rng.uniform(0.0, TWO_PI))
