"""Seeded claim campaigns, validity maps and certificate re-checking.

A campaign runs one claim checker over ``trials`` generated instances.  Trial
``i`` draws from ``numpy.random.default_rng([seed, i])``, so every trial is
reproducible on its own and the report does not depend on scheduling.
"""
from concurrent.futures import ThreadPoolExecutor
import copy
import csv
from dataclasses import dataclass, field
import io
import json
import math
import os
import time

import jsonschema
import numpy as np
from numpy.polynomial import legendre

from . import bandlimited, circlepoly, rearrange, trigbound
from .bandlimited import Spectrum, make_spectrum, min_nodes
from .circlepoly import Poly
from .claims import CLAIM_IDS, DEFAULT_TOL
from .errors import ConfigError, UnclabError
from .rearrange import CosineSeries, montgomery_embed
from .setlib import TWO_PI, ArcUnion, IntervalUnion, from_indicator, random_arc_union, random_union
from .trigbound import TrigConfig

CSV_HEADER = ["claim", "param1", "param2", "trials", "violations", "worst_margin", "runtime_ms"]
RECHECK_TOL = 1e-9
STRUCTURED_MIN_NODES = 400

_RANGE = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_INT_RANGE = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2}

CAMPAIGN_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "unclab campaign",
    "type": "object",
    "required": ["claim_id", "trials", "seed"],
    "additionalProperties": False,
    "properties": {
        "claim_id": {"enum": list(CLAIM_IDS)},
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "hypothesis_override": {"type": "boolean"},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "generator": {"enum": ["random", "structured", "fixed"]},
                "witness": {"type": "object"},
                "degree": _INT_RANGE,
                "delta_frac": _RANGE,
                "delta": _RANGE,
                "r_max": {"type": "integer", "minimum": 1},
                "r": _INT_RANGE,
                "n": _INT_RANGE,
                "grid": {"type": "integer", "minimum": 100},
                "W": _RANGE,
                "WT_frac": _RANGE,
                "nodes": {"type": "integer", "minimum": 2},
                "window_span": {"type": "number", "exclusiveMinimum": 1},
                "profile_degree": {"type": "integer", "minimum": 0},
            },
        },
    },
}

_POLY_DEFAULTS = {"generator": "random", "degree": [1, 8], "delta_frac": [0.05, 1.0], "r_max": 3}
_COSINE_DEFAULTS = {"generator": "random", "degree": [1, 6], "delta_frac": [0.05, 1.0], "r_max": 3}
_CONT_DEFAULTS = {
    "generator": "random",
    "W": [0.25, 2.0],
    "WT_frac": [0.05, 1.0],
    "r_max": 3,
    "nodes": 64,
    "window_span": 3.0,
    "profile_degree": 4,
}
DEFAULT_PARAMS = {
    "thm_discrete": _POLY_DEFAULTS,
    "thm_improv": _COSINE_DEFAULTS,
    "montgomery20": _COSINE_DEFAULTS,
    "lemma_h_bound": {"generator": "random", "r": [1, 4]},
    "lemma_sin_cluster": {"generator": "random", "n": [1, 4], "grid": 2000},
    "thm_finite_continuous": _CONT_DEFAULTS,
    "thm_main_continuous": _CONT_DEFAULTS,
}
DEFAULT_TOLS = {
    "thm_finite_continuous": bandlimited.CONTINUOUS_TOL,
    "thm_main_continuous": bandlimited.CONTINUOUS_TOL,
    "lemma_sin_cluster": trigbound.SIN_CLUSTER_TOL,
}


class TrialError(UnclabError):
    """A checker failed inside a campaign; ``trial`` is the failing index."""

    def __init__(self, trial, cause):
        super().__init__(f"trial {trial}: {type(cause).__name__}: {cause}")
        self.trial = trial
        self.cause = cause


@dataclass(frozen=True)
class Campaign:
    claim_id: str
    trials: int
    seed: int
    hypothesis_override: bool = False
    params: dict = field(default_factory=dict)
    tol: float = None

    def __post_init__(self):
        if self.tol is None:
            object.__setattr__(self, "tol", DEFAULT_TOLS.get(self.claim_id, DEFAULT_TOL))
        validate_campaign(self.to_json())
        merged = dict(DEFAULT_PARAMS[self.claim_id])
        merged.update(self.params)
        if merged["generator"] == "fixed" and "witness" not in merged:
            raise ConfigError("generator 'fixed' needs a 'witness' block")
        object.__setattr__(self, "params", merged)

    def to_json(self):
        return {
            "claim_id": self.claim_id,
            "trials": self.trials,
            "seed": self.seed,
            "hypothesis_override": self.hypothesis_override,
            "tol": self.tol,
            "params": self.params,
        }

    @classmethod
    def from_json(cls, obj):
        validate_campaign(obj)
        return cls(
            claim_id=obj["claim_id"],
            trials=obj["trials"],
            seed=obj["seed"],
            hypothesis_override=obj.get("hypothesis_override", False),
            params=copy.deepcopy(obj.get("params", {})),
            tol=obj.get("tol"),
        )


def validate_campaign(obj):
    try:
        jsonschema.validate(obj, CAMPAIGN_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid campaign config: {exc.message}") from exc


@dataclass
class CampaignReport:
    campaign: Campaign
    violations: list
    margins: list
    ratios: list
    runtime_ms: float = None

    @property
    def worst_margin(self):
        return max(self.margins)

    @property
    def stats(self):
        m = np.asarray(self.margins)
        out = {"min": float(m.min()), "max": float(m.max()), "mean": float(math.fsum(m) / m.size)}
        if self.ratios:
            out["max_ratio"] = float(max(self.ratios))
        return out

    def to_json(self):
        return {
            "campaign": self.campaign.to_json(),
            "trials": len(self.margins),
            "violations": [v.to_json() for v in self.violations],
            "worst_margin": self.worst_margin,
            "stats": self.stats,
            "runtime_ms": self.runtime_ms,
        }


# --------------------------------------------------------------------------
# instance generators: (params, rng, tol, override) -> ClaimReport
# --------------------------------------------------------------------------

def _uniform(rng, lo_hi):
    lo, hi = lo_hi
    return float(rng.uniform(lo, hi)) if hi > lo else float(lo)


def _int_in(rng, lo_hi):
    lo, hi = lo_hi
    return int(rng.integers(lo, hi + 1))


def _delta(params, rng, n):
    if "delta" in params:
        return _uniform(rng, params["delta"])
    return _uniform(rng, params["delta_frac"]) * math.pi / n


def _complex_normal(rng, size):
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def _peak_arcs(n, delta, r, phase):
    # r arcs of length 2 delta / r centred on peaks of |1 + e^{i phase} z^n|^2
    half = delta / r
    centres = [(-phase + TWO_PI * j) / n for j in range(r)]
    return ArcUnion([(c - half, c + half) for c in centres])


def _gen_circle(claim, params, rng, tol, override):
    structured = params["generator"] == "structured"
    if claim == "thm_discrete":
        n = _int_in(rng, params["degree"])
        delta = _delta(params, rng, n)
        if structured:
            phase = float(rng.uniform(0.0, TWO_PI))
            p = Poly(np.r_[1.0, np.zeros(n - 1), np.exp(1j * phase)])
            omega = _peak_arcs(n, delta, min(n, params["r_max"]), phase)
        else:
            p = Poly(_complex_normal(rng, n + 1))
            omega = random_arc_union(_int_in(rng, [1, params["r_max"]]), 2.0 * delta, rng)
        return circlepoly.check_thm_discrete(p, omega, tol, override)
    # cosine-series claims: P has degree 2m
    m = _int_in(rng, params["degree"])
    n = 2 * m
    delta = _delta(params, rng, n)
    if structured:
        a = np.zeros(m + 1)
        a[m] = 1.0
        p = montgomery_embed(CosineSeries(a.tolist()))
        omega = _peak_arcs(n, delta, min(n, params["r_max"]), 0.0)
    else:
        a = rng.normal(size=m + 1)
        p = montgomery_embed(CosineSeries(a.tolist()))
        omega = random_arc_union(_int_in(rng, [1, params["r_max"]]), 2.0 * delta, rng)
    if claim == "thm_improv":
        return rearrange.check_thm_improv(p, omega, tol, override)
    return rearrange.check_montgomery20(p, omega, tol)


def _gen_lemma_h(params, rng, tol, override):
    r = _int_in(rng, params["r"])
    if params["generator"] == "structured":
        d = float(rng.uniform(0.0, math.pi))
        c = TrigConfig([0.0] * r, [d] * r)
    else:
        c = TrigConfig(rng.uniform(0.0, TWO_PI, r).tolist(), rng.uniform(0.0, TWO_PI, r).tolist())
    return trigbound.check_lemma_h(c, tol)


def _gen_sin_cluster(params, rng, tol, override):
    n = _int_in(rng, params["n"])
    x = rng.uniform(-math.pi, 3.0 * math.pi, n)
    return trigbound.check_lemma_sin_cluster(x.tolist(), params["grid"], tol)


def _legendre_profile(coeffs, W):
    def profile(w):
        return legendre.legval(2.0 * np.asarray(w) / W, coeffs)

    return profile


def _indicator_set(rng, span):
    # threshold a random trigonometric field sampled on a grid in (-span, span)
    t = np.linspace(-span, span, 129)
    freqs = rng.uniform(0.2, 2.0, 4)
    phases = rng.uniform(0.0, TWO_PI, 4)
    field_ = np.cos(np.outer(t, freqs) + phases).sum(axis=1)
    level = np.quantile(field_, float(rng.uniform(0.5, 0.85)))
    tset = from_indicator(zip(t, field_ > level))
    return tset if len(tset) else IntervalUnion([(-0.5, 0.5)])


def _gen_continuous(claim, params, rng, tol, override):
    frac = _uniform(rng, params["WT_frac"])
    if params["generator"] == "structured":
        W = _uniform(rng, params["W"])
        T = frac / W
        eps = W / 50.0
        c = 0.5 * W - 0.5 * eps
        r = max(2, params["r_max"])
        ln = T / r
        tset = IntervalUnion([(k / (2.0 * c) - 0.5 * ln, k / (2.0 * c) + 0.5 * ln) for k in range(r)])
        edge = 0.5 * W - eps
        nodes = max(params["nodes"], STRUCTURED_MIN_NODES, min_nodes(W, tset))
        s = make_spectrum(W, lambda w: (np.abs(w) >= edge).astype(float), nodes, [-edge, edge])
    else:
        if claim == "thm_main_continuous":
            tset = _indicator_set(rng, 1.0)
            T = tset.measure
            W = frac / T
        else:
            W = _uniform(rng, params["W"])
            T = frac / W
            r = _int_in(rng, [1, params["r_max"]])
            span = params["window_span"] * T
            tset = random_union(r, T, (-span, span), rng)
        coeffs = _complex_normal(rng, params["profile_degree"] + 1)
        nodes = max(params["nodes"], min_nodes(W, tset))
        s = make_spectrum(W, _legendre_profile(coeffs, W), nodes)
    return bandlimited.check_thm_main(s, tset, tol, override, claim_id=claim)


def _fixed(claim, params, rng, tol, override):
    return recompute(claim, params["witness"], tol, override)


def generate_and_check(campaign, trial):
    rng = np.random.default_rng([campaign.seed, trial])
    p = campaign.params
    claim = campaign.claim_id
    tol, override = campaign.tol, campaign.hypothesis_override
    if p["generator"] == "fixed":
        return _fixed(claim, p, rng, tol, override)
    if claim in ("thm_discrete", "thm_improv", "montgomery20"):
        return _gen_circle(claim, p, rng, tol, override)
    if claim == "lemma_h_bound":
        return _gen_lemma_h(p, rng, tol, override)
    if claim == "lemma_sin_cluster":
        return _gen_sin_cluster(p, rng, tol, override)
    return _gen_continuous(claim, p, rng, tol, override)


# --------------------------------------------------------------------------
# recomputation from witnesses
# --------------------------------------------------------------------------

def recompute(claim_id, witness, tol, override=False):
    """Rebuild the instance in ``witness`` and re-run the claim's checker."""
    try:
        if claim_id in ("thm_discrete", "thm_improv", "montgomery20"):
            p = Poly.from_json(witness["poly"])
            omega = ArcUnion.from_json(witness["omega"])
            ov = bool(override or witness.get("override", False))
            if claim_id == "thm_discrete":
                return circlepoly.check_thm_discrete(p, omega, tol, ov)
            if claim_id == "thm_improv":
                return rearrange.check_thm_improv(p, omega, tol, ov)
            return rearrange.check_montgomery20(p, omega, tol)
        if claim_id == "lemma_h_bound":
            return trigbound.check_lemma_h(TrigConfig.from_json(witness), tol)
        if claim_id == "lemma_sin_cluster":
            return trigbound.check_lemma_sin_cluster(witness["x"], witness.get("grid", 2000), tol)
        if claim_id in ("thm_finite_continuous", "thm_main_continuous"):
            s = Spectrum.from_json(witness["spectrum"])
            tset = IntervalUnion.from_json(witness["tset"])
            ov = bool(override or witness.get("override", False))
            return bandlimited.check_thm_main(s, tset, tol, ov, claim_id=claim_id)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed witness for {claim_id}: {exc!r}") from exc
    raise ConfigError(f"unknown claim id {claim_id!r}")


def _close(a, b):
    return abs(a - b) <= RECHECK_TOL * max(1.0, abs(a), abs(b))


def recheck(certificate):
    """True iff the certificate's sides recompute to within 1e-9 and its flags are consistent."""
    try:
        claim_id = certificate["claim_id"]
        lhs, rhs = float(certificate["lhs"]), float(certificate["rhs"])
        tol = float(certificate["tol"])
        satisfied = bool(certificate["satisfied"])
        witness = certificate["witness"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed certificate: {exc!r}") from exc
    if not isinstance(witness, dict):
        raise ConfigError("certificate witness must be an object")
    margin = lhs - rhs
    if "margin" in certificate and not _close(float(certificate["margin"]), margin):
        return False
    if satisfied != (margin <= tol):
        return False
    fresh = recompute(claim_id, witness, tol)
    return _close(fresh.lhs, lhs) and _close(fresh.rhs, rhs)


# --------------------------------------------------------------------------
# drivers
# --------------------------------------------------------------------------

def _threads():
    try:
        return max(1, int(os.environ.get("UNCLAB_THREADS", "1")))
    except ValueError:
        return 1


def _one(campaign, i):
    try:
        return generate_and_check(campaign, i)
    except UnclabError as exc:
        raise TrialError(i, exc) from exc


def run_campaign(campaign, timing=False):
    """Run every trial and collect violations (margin above ``tol``).

    ``runtime_ms`` is recorded only when ``timing`` is set, so that default
    reports are byte-identical across runs.
    """
    t0 = time.perf_counter()
    idx = range(campaign.trials)
    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda i: _one(campaign, i), idx))
    else:
        reports = [_one(campaign, i) for i in idx]
    ratios = []
    if campaign.claim_id in ("thm_improv", "montgomery20"):
        ratios = [r.ratio for r in reports]
    runtime = (time.perf_counter() - t0) * 1e3 if timing else None
    return CampaignReport(
        campaign=campaign,
        violations=[r for r in reports if not r.satisfied],
        margins=[r.margin for r in reports],
        ratios=ratios,
        runtime_ms=runtime,
    )


def _cell_params(params, name, value):
    out = dict(params)
    out[name] = [value, value] if name in _RANGE_PARAMS else value
    if name == "delta":
        out.pop("delta_frac", None)
    return out


_RANGE_PARAMS = {"degree", "delta_frac", "delta", "r", "n", "W", "WT_frac"}


def grid_cells(grid):
    """Cells of a map grid: explicit ``cells`` or the product of ``values1`` x ``values2``."""
    if "cells" in grid:
        cells = [tuple(c) for c in grid["cells"]]
    else:
        cells = [(a, b) for a in grid["values1"] for b in grid["values2"]]
    if not cells:
        raise ConfigError("empty grid")
    return cells


def validity_map(template, grid, timing=False):
    """One row per grid cell: ``claim, param1, param2, trials, violations, worst_margin, runtime_ms``."""
    name1, name2 = grid["param1"], grid["param2"]
    rows = []
    base = template.to_json()
    for v1, v2 in grid_cells(grid):
        params = _cell_params(_cell_params(template.params, name1, v1), name2, v2)
        cell = Campaign.from_json({**base, "params": params})
        rep = run_campaign(cell, timing=timing)
        rows.append(
            {
                "claim": template.claim_id,
                "param1": v1,
                "param2": v2,
                "trials": cell.trials,
                "violations": len(rep.violations),
                "worst_margin": rep.worst_margin,
                "runtime_ms": rep.runtime_ms,
            }
        )
    return rows


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow([_fmt(row[k]) for k in CSV_HEADER])
    return buf.getvalue()


def campaign_row(report):
    return {
        "claim": report.campaign.claim_id,
        "param1": None,
        "param2": None,
        "trials": len(report.margins),
        "violations": len(report.violations),
        "worst_margin": report.worst_margin,
        "runtime_ms": report.runtime_ms,
    }


def dumps(obj):
    """Canonical JSON: fixed key order, shortest round-trip floats."""
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"
