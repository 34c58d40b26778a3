"""Claim identifiers and the :class:`ClaimReport` certificate."""
from dataclasses import dataclass, field
import math

CLAIM_IDS = (
    "lemma_sin_cluster",
    "lemma_h_bound",
    "thm_finite_continuous",
    "thm_main_continuous",
    "thm_discrete",
    "thm_improv",
    "montgomery20",
)

DEFAULT_TOL = 1e-10

# numerical tolerance on hypothesis gates such as n*delta <= pi
GATE_SLACK = 1e-12


@dataclass(frozen=True)
class ClaimReport:
    """One checked inequality ``lhs <= rhs``.

    ``margin = lhs - rhs``; a positive margin above ``tol`` is a violation.
    ``witness`` holds the JSON-ready instance from which both sides can be
    recomputed.
    """

    claim_id: str
    lhs: float
    rhs: float
    tol: float
    witness: dict = field(default_factory=dict)

    @property
    def margin(self):
        return self.lhs - self.rhs

    @property
    def satisfied(self):
        return self.margin <= self.tol

    @property
    def ratio(self):
        return self.lhs / self.rhs if self.rhs != 0.0 else math.inf

    def to_json(self):
        return {
            "claim_id": self.claim_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "satisfied": self.satisfied,
            "tol": self.tol,
            "witness": self.witness,
        }


def make_report(claim_id, lhs, rhs, tol, witness):
    if claim_id not in CLAIM_IDS:
        raise ValueError(f"unknown claim id {claim_id!r}")
    return ClaimReport(claim_id, float(lhs), float(rhs), float(tol), witness)
