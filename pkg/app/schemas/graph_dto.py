from pydantic import BaseModel, Field
from typing import Dict, List, Literal, Optional, Tuple


class GraphPayload(BaseModel):
    """Request body carrying one graph in the text format"""

    graph: str = Field(..., description="'p graph n m' header, 'c v color' and 'e u v' lines")


class GraphPairPayload(BaseModel):
    g: str = Field(..., description="First graph text")
    h: str = Field(..., description="Second graph text")


class SequencePayload(BaseModel):
    sequence: str = Field(..., description="Graph text followed by 'm a b' merge lines")


class GraphResponse(BaseModel):
    graph: str
    n: int
    m: int


class CanonResponse(BaseModel):
    encoding: str = Field(..., description="Hex canonical encoding")
    order: List[int] = Field(..., description="Canonical position -> vertex")
    canonical_graph: str


class IsoResponse(BaseModel):
    isomorphic: bool
    method: Literal["canonical", "oracle", "reconstruct"]
    mapping: Optional[Dict[int, int]] = None


class RecognizeResponse(BaseModel):
    twinwidth_le1: bool
    sequence: List[Tuple[int, int]] = Field(default_factory=list, description="Certificate merges")
    width: Optional[int] = None


class CsResponse(BaseModel):
    """cs string of a start pair, or the lex-min invariant"""

    failed: bool
    tokens: List[str] = Field(default_factory=list)
    start: Optional[Tuple[int, int]] = None


class GenerateRequest(BaseModel):
    family: Literal["halfgraph", "cfi", "cograph", "tww1", "prime-tww1", "chain", "random"]
    t: int = Field(3, ge=1, description="Half-graph order")
    n: int = Field(8, ge=1, description="Vertex count for random families")
    a: int = Field(4, ge=1)
    b: int = Field(4, ge=1)
    p: float = Field(0.5, ge=0, le=1, description="Edge probability or chain density")
    base: str = Field("K4", description="CFI base: K4, Petersen or circulant:<n>:<jump>")
    odd: bool = Field(False, description="Return the twisted CFI graph")
    s: int = Field(0, ge=0, description="Subdivide the result with s inner vertices per edge")
    seed: int = Field(0, ge=0)
