"""Numerical laboratory for concentration inequalities of polynomials and bandlimited functions."""
from .bandlimited import Spectrum, check_thm_main, concentration, make_spectrum, time_energy
from .campaign import Campaign, CampaignReport, recheck, run_campaign, validity_map
from .circlepoly import Poly, arc_energy, check_thm_discrete
from .claims import CLAIM_IDS, ClaimReport
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    HypothesisError,
    InfeasibleRequestError,
    MalformedInputError,
    ResolutionError,
    SizeGuardError,
    UnclabError,
)
from .rearrange import CosineSeries, check_montgomery20, check_thm_improv, hlp_order, montgomery_embed
from .setlib import ArcUnion, IntervalUnion
from .specsup import search_extremal_set, sup_concentration, top_eigenpair
from .trigbound import TrigConfig, check_lemma_h, check_lemma_sin_cluster, multistart_max_h

__version__ = "0.1.0"

__all__ = [
    "ArcUnion",
    "CLAIM_IDS",
    "Campaign",
    "CampaignReport",
    "ClaimReport",
    "ConfigError",
    "ConvergenceError",
    "CosineSeries",
    "DegenerateInputError",
    "DomainError",
    "HypothesisError",
    "InfeasibleRequestError",
    "IntervalUnion",
    "MalformedInputError",
    "Poly",
    "ResolutionError",
    "SizeGuardError",
    "Spectrum",
    "TrigConfig",
    "UnclabError",
    "arc_energy",
    "check_lemma_h",
    "check_lemma_sin_cluster",
    "check_montgomery20",
    "check_thm_discrete",
    "check_thm_improv",
    "check_thm_main",
    "concentration",
    "hlp_order",
    "make_spectrum",
    "montgomery_embed",
    "multistart_max_h",
    "recheck",
    "run_campaign",
    "search_extremal_set",
    "sup_concentration",
    "time_energy",
    "top_eigenpair",
    "validity_map",
]
