from pydantic import BaseModel, Field
from typing import Dict, List, Literal, Optional


class WlColoringResponse(BaseModel):
    """Stable k-WL coloring summary"""

    k: int = Field(..., ge=1)
    n: int = Field(..., ge=0)
    classes: int = Field(..., description="Number of color classes")
    rounds: Optional[int] = Field(None, description="Refinement rounds until stable")
    histogram: Dict[int, int] = Field(default_factory=dict, description="Color id -> class size")
    vertex_colors: Optional[List[int]] = Field(None, description="Per-vertex colors for k = 1")


class WlVerdict(BaseModel):
    """Outcome of comparing two graphs by k-WL"""

    k: int
    distinguished: bool
    witness_color: Optional[int] = Field(
        None, description="Shared-palette color whose class sizes differ"
    )
    witness_counts: Optional[List[int]] = Field(None, description="Class sizes in g and h")
    rounds: Optional[int] = None
    histogram_g: Dict[int, int] = Field(default_factory=dict)
    histogram_h: Dict[int, int] = Field(default_factory=dict)


class GameVerdict(BaseModel):
    """Outcome of the bijective k-pebble game"""

    k: int
    winner: Literal["Spoiler", "Duplicator"]
    surviving_positions: Optional[int] = Field(
        None, description="Positions in Duplicator's greatest fixed point"
    )
    rounds: int = Field(0, description="Fixpoint iterations; Spoiler's strategy depth bound")
