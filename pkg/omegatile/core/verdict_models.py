"""
Pydantic models for three-valued bounded verdicts
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .models import PictureWindow, RunAssignment


class VerdictOutcome(str, Enum):
    CERTIFIED_NO = "certified_no"
    WITNESS_YES = "witness_yes"
    UNKNOWN = "unknown"


# Order used when combining verdicts of alternatives (unions, oracles)
OUTCOME_RANK = {
    VerdictOutcome.CERTIFIED_NO: 0,
    VerdictOutcome.UNKNOWN: 1,
    VerdictOutcome.WITNESS_YES: 2,
}


class Witness(BaseModel):
    """Bounded evidence: a consistent picture window and run"""
    model_config = ConfigDict(frozen=True)

    picture: Optional[PictureWindow] = Field(None, description="Window the run lives on")
    run: Optional[RunAssignment] = Field(None, description="A valid run on the window")
    cell: Optional[Tuple[int, int]] = Field(None, description="Cell carrying an accepting state, for E-acceptance")


class InfApproximation(BaseModel):
    """Finite stand-in for Inf(rho): state occurrence counts on the window"""
    model_config = ConfigDict(frozen=True)

    seen: Dict[str, int] = Field(default_factory=dict, description="Occurrences per state over the scope cells")
    diagonal_seen: Dict[str, int] = Field(default_factory=dict, description="Occurrences per state on the diagonal")
    outer_seen: Dict[str, int] = Field(default_factory=dict, description="Occurrences in the outer half of the window")
    muller_candidates: List[List[str]] = Field(default_factory=list, description="Muller sets contained in the outer-half states")


class BoundedVerdict(BaseModel):
    """Outcome of a semi-decision question evaluated at finite depth"""
    model_config = ConfigDict(frozen=True)

    outcome: VerdictOutcome
    depth: int = Field(..., ge=0, description="Depth (or step count) the verdict was computed at")
    witness: Optional[Witness] = None
    notes: str = Field("", description="Free-form evidence summary")
    evidence: Optional[InfApproximation] = None
    score: int = Field(0, description="Acceptance-evidence score of the reported run")

    @property
    def rank(self) -> int:
        return OUTCOME_RANK[self.outcome]

    def summary(self) -> str:
        text = f"{self.outcome.value} at depth {self.depth}"
        return f"{text} ({self.notes})" if self.notes else text
