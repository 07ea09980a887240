from pydantic import BaseModel, Field
from typing import Dict, List, Optional, Tuple


class HalfGraphCheck(BaseModel):
    """Partial half-graph recognition result"""

    is_partial_half_graph: bool
    left_order: List[int] = Field(
        default_factory=list, description="Left vertices by non-increasing neighborhood"
    )
    left_index: Dict[int, int] = Field(
        default_factory=dict, description="Left vertex -> i with the vertex playing v_i"
    )
    right_index: Dict[int, int] = Field(
        default_factory=dict, description="Right vertex -> j with the vertex playing w_j"
    )
    host_size: int = Field(0, description="N such that the embedding lands in H_N")
    incomparable: Optional[Tuple[int, int]] = Field(
        None, description="Two left vertices with incomparable neighborhoods"
    )


class HalfGraphWitness(BaseModel):
    """Largest semi-induced half-graph"""

    t: int = Field(..., ge=0)
    pairs: List[Tuple[int, int]] = Field(
        default_factory=list, description="(v_i, w_i) for i = 1..t"
    )


class MatchingResult(BaseModel):
    size: int = Field(..., ge=0)
    pairs: List[Tuple[int, int]] = Field(default_factory=list)


class BicliqueResult(BaseModel):
    t: int = Field(..., ge=0)
    left: List[int] = Field(default_factory=list)
    right: List[int] = Field(default_factory=list)


class RankResult(BaseModel):
    rank: int = Field(..., ge=0)
    rows: List[int] = Field(default_factory=list)
    cols: List[int] = Field(default_factory=list)


class RedCutViolation(BaseModel):
    step: int
    part_p: List[int]
    part_q: List[int]
    incomparable: Tuple[int, int]


class RedCutAudit(BaseModel):
    """Every pair of parts at every step checked for nested neighborhoods"""

    width: int
    steps: int
    cuts_checked: int
    violations: List[RedCutViolation] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


class BipartitePayload(BaseModel):
    graph: str = Field(..., description="Graph text")
    left: List[int] = Field(..., description="Left side")
    right: Optional[List[int]] = Field(None, description="Right side; defaults to the other vertices")


class RankPayload(BaseModel):
    graph: str = Field(..., description="Graph text")
    a: List[int]
    b: List[int]
    connectivity: bool = Field(False, description="Rank-connectivity instead of the biadjacency rank")
