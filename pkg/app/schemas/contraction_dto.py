from pydantic import BaseModel, ConfigDict, Field
from typing import Dict, List, Optional, Tuple


class StepWidth(BaseModel):
    """Width figures of the trigraph right after one merge"""

    step: int = Field(..., ge=0, description="Merge index, 0-based")
    merged: Tuple[int, int] = Field(..., description="Part ids merged at this step")
    part: int = Field(..., description="Fresh id of the merged part")
    red_degree: int = Field(..., ge=0, description="Max red degree after the merge")
    red_component: int = Field(..., ge=0, description="Max red component order after the merge")


class WidthReport(BaseModel):
    """Replay report of a contraction sequence"""

    width: int = Field(..., ge=0)
    max_red_component: int = Field(..., ge=0)
    steps: List[StepWidth] = Field(default_factory=list)
    parts: Dict[int, List[int]] = Field(
        default_factory=dict, description="Live part id -> original vertices after the last merge"
    )

    @property
    def per_step(self) -> List[Tuple[int, int]]:
        return [(s.red_degree, s.red_component) for s in self.steps]


class SearchBudget(BaseModel):
    """Limits for twin-width search"""

    model_config = ConfigDict(frozen=True)

    max_nodes: int = Field(default=2_000_000, gt=0, description="Search-tree node cap")
    time_cap: float = Field(default=600.0, gt=0, description="Wall-clock cap in seconds")
    beam: int = Field(default=8, gt=0, description="Beam width of the heuristic")


class TwinWidthResult(BaseModel):
    """Outcome of exact twin-width search; width is None when the budget ran out"""

    width: Optional[int] = None
    lower_bound: int = 0
    upper_bound: Optional[int] = None
    sequence: List[Tuple[int, int]] = Field(default_factory=list)
    nodes: int = 0
    time: float = 0.0
    exhausted: bool = False
    objective: str = Field(default="red_degree", description="red_degree or red_component")


class HeuristicResult(BaseModel):
    """Outcome of the beam heuristic; found is False when no sequence met the target"""

    found: bool
    target: int
    width: Optional[int] = Field(None, description="Best width achieved, reported even when not found")
    sequence: List[Tuple[int, int]] = Field(default_factory=list)
    nodes: int = 0
    time: float = 0.0
