import copy
import json
import math
import pathlib

import pytest

from unclab.campaign import (
    CAMPAIGN_SCHEMA,
    CSV_HEADER,
    Campaign,
    TrialError,
    dumps,
    recheck,
    rows_to_csv,
    run_campaign,
    validity_map,
)
from unclab.circlepoly import Poly, check_thm_discrete
from unclab.errors import ConfigError
from unclab.setlib import ArcUnion
from unclab.trigbound import TrigConfig, check_lemma_h

PI = math.pi
ANTIPODAL_WITNESS = {
    "poly": Poly([1, 0, 1]).to_json(),
    "omega": ArcUnion([(-PI / 8, PI / 8), (7 * PI / 8, 9 * PI / 8)]).to_json(),
}


def test_schema_doc_in_sync():
    doc = pathlib.Path(__file__).parents[1] / "docs" / "campaign_schema.json"
    assert json.loads(doc.read_text()) == CAMPAIGN_SCHEMA


@pytest.mark.parametrize(
    "cfg",
    [
        {"claim_id": "thm_discrete", "trials": 0, "seed": 1},
        {"claim_id": "nope", "trials": 1, "seed": 1},
        {"claim_id": "thm_discrete", "trials": 1, "seed": 1, "tol": -1},
        {"claim_id": "thm_discrete", "trials": 1, "seed": 1, "params": {"bogus": 1}},
        {"claim_id": "thm_discrete", "trials": 1, "seed": 1, "params": {"generator": "fixed"}},
    ],
)
def test_invalid_configs(cfg):
    with pytest.raises(ConfigError):
        Campaign.from_json(cfg)


def test_fixed_antipodal_campaign():
    c = Campaign("thm_discrete", 1, 0, params={"generator": "fixed", "witness": ANTIPODAL_WITNESS})
    rep = run_campaign(c)
    assert len(rep.violations) == 1
    assert rep.worst_margin == pytest.approx(2 * math.sqrt(2) - 2, abs=1e-9)
    assert all(recheck(v.to_json()) for v in rep.violations)


def test_lemma_h_r1_no_violations():
    rep = run_campaign(Campaign("lemma_h_bound", 1000, 3, params={"r": [1, 1]}))
    assert not rep.violations
    assert len(rep.margins) == 1000


def test_thm_improv_ratio_below_montgomery():
    rep = run_campaign(Campaign("thm_improv", 300, 4))
    assert rep.stats["max_ratio"] < 20 + 1e-6


def test_per_trial_substreams_independent_of_count():
    a = run_campaign(Campaign("thm_discrete", 5, 9))
    b = run_campaign(Campaign("thm_discrete", 8, 9))
    assert a.margins == b.margins[:5]


def test_threads_do_not_change_report(monkeypatch):
    c = Campaign("thm_finite_continuous", 6, 2)
    serial = dumps(run_campaign(c).to_json())
    monkeypatch.setenv("UNCLAB_THREADS", "3")
    assert dumps(run_campaign(c).to_json()) == serial


@pytest.mark.parametrize(
    "claim, gen",
    [
        ("thm_discrete", "structured"),
        ("thm_improv", "structured"),
        ("montgomery20", "random"),
        ("lemma_h_bound", "structured"),
        ("lemma_sin_cluster", "random"),
        ("thm_finite_continuous", "structured"),
        ("thm_main_continuous", "random"),
    ],
)
def test_every_violation_rechecks(claim, gen):
    rep = run_campaign(Campaign(claim, 8, 1, params={"generator": gen}))
    for v in rep.violations:
        assert recheck(v.to_json())
    assert rep.worst_margin == max(rep.margins)


def test_structured_discrete_finds_violations():
    rep = run_campaign(Campaign("thm_discrete", 20, 0, params={"generator": "structured", "degree": [2, 6]}))
    assert len(rep.violations) == 20


def test_satisfied_certificates_roundtrip():
    rep = check_thm_discrete(Poly([1, 2j, -0.5]), ArcUnion([(0.1, 0.5), (2.0, 2.3)]))
    assert rep.satisfied and recheck(json.loads(json.dumps(rep.to_json())))


def test_recheck_detects_tampering():
    cert = check_thm_discrete(Poly([1, 0, 1]), ArcUnion.from_json(ANTIPODAL_WITNESS["omega"])).to_json()
    assert recheck(cert)
    bad = copy.deepcopy(cert)
    bad["rhs"] += 1e-6
    bad["margin"] = bad["lhs"] - bad["rhs"]
    assert not recheck(bad)
    flipped = copy.deepcopy(cert)
    flipped["satisfied"] = True
    assert not recheck(flipped)
    pairs = check_lemma_h(TrigConfig([0, 0], [1, 1])).to_json()
    assert recheck(pairs)
    with pytest.raises(ConfigError):
        recheck({"claim_id": "thm_discrete", "lhs": 1, "rhs": 1, "tol": 1e-10, "satisfied": True, "witness": {}})
    with pytest.raises(ConfigError):
        recheck({"claim_id": "thm_discrete"})


def test_trial_error_carries_index():
    # a witness outside the hypothesis, without override, fails in trial 0
    w = {"poly": Poly([1, 0, 0, 0, 0, 1]).to_json(), "omega": ArcUnion([(0, 2.0)]).to_json()}
    with pytest.raises(TrialError) as exc:
        run_campaign(Campaign("thm_discrete", 2, 0, params={"generator": "fixed", "witness": w}))
    assert exc.value.trial == 0


def test_validity_map_rows():
    tmpl = Campaign("thm_discrete", 4, 0, params={"generator": "structured"})
    grid = {"param1": "degree", "param2": "delta", "cells": [[n, PI / (2 * n)] for n in range(1, 5)]}
    rows = validity_map(tmpl, grid)
    assert [r["param1"] for r in rows] == [1, 2, 3, 4]
    assert rows[1]["violations"] >= 1
    assert rows[0]["violations"] == 0
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert len(text.splitlines()) == 5


def test_single_cell_map_equals_campaign():
    tmpl = Campaign("thm_discrete", 6, 5, params={"degree": [3, 3], "delta_frac": [0.5, 0.5]})
    rows = validity_map(tmpl, {"param1": "degree", "param2": "delta_frac", "cells": [[3, 0.5]]})
    rep = run_campaign(tmpl)
    assert rows[0]["worst_margin"] == rep.worst_margin
    assert rows[0]["violations"] == len(rep.violations)


@pytest.mark.parametrize("claim", ["thm_discrete", "thm_finite_continuous"])
def test_intervals_only_map_has_no_violations(claim):
    if claim == "thm_discrete":
        tmpl = Campaign(claim, 30, 0, params={"r_max": 1})
        grid = {"param1": "degree", "param2": "delta_frac", "values1": [1, 3, 6], "values2": [0.3, 1.0]}
    else:
        tmpl = Campaign(claim, 15, 0, params={"r_max": 1})
        grid = {"param1": "W", "param2": "WT_frac", "values1": [0.5, 2.0], "values2": [0.3, 1.0]}
    assert all(r["violations"] == 0 for r in validity_map(tmpl, grid))


def test_empty_grid_rejected():
    with pytest.raises(ConfigError):
        validity_map(Campaign("thm_discrete", 1, 0), {"param1": "degree", "param2": "delta", "cells": []})


def test_reports_are_byte_identical():
    c = Campaign("thm_main_continuous", 5, 11)
    assert dumps(run_campaign(c).to_json()) == dumps(run_campaign(c).to_json())
    assert run_campaign(c).runtime_ms is None
    assert run_campaign(c, timing=True).runtime_ms >= 0
