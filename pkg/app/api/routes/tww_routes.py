from fastapi import APIRouter, HTTPException, status, Query
from typing import Literal, Optional

from app.graphs.graph_io import parse_graph, parse_sequence
from app.schemas.contraction_dto import HeuristicResult, SearchBudget, TwinWidthResult, WidthReport
from app.schemas.graph_dto import GraphPayload, SequencePayload
from app.services.graph_service import GraphService
from app.services.twinwidth_service import default_budget

router = APIRouter(prefix="/tww", tags=["Twin-width"])


@router.post("/exact", response_model=TwinWidthResult)
async def exact_twinwidth(
    payload: GraphPayload,
    mode: Literal["exact", "component", "naive"] = Query("exact"),
    max_nodes: Optional[int] = Query(None, gt=0, description="Search-tree node cap"),
    time_cap: Optional[float] = Query(None, gt=0, description="Wall-clock cap in seconds"),
):
    """
    Exact twin-width (or component twin-width) by branch and bound.

    Args:
        payload (GraphPayload): The graph
        mode (str): exact, component or naive enumeration
        max_nodes (int): Optional node cap overriding the settings
        time_cap (float): Optional time cap overriding the settings

    Returns:
        TwinWidthResult: The width with its certificate, or bounds with exhausted set

    Raises:
        HTTPException: If the graph is malformed or too large for naive enumeration
    """
    base = default_budget()
    budget = SearchBudget(
        max_nodes=max_nodes or base.max_nodes,
        time_cap=time_cap or base.time_cap,
        beam=base.beam,
    )
    try:
        return GraphService().twinwidth(parse_graph(payload.graph), mode, budget)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/heuristic", response_model=HeuristicResult)
async def heuristic_twinwidth(payload: GraphPayload, target: int = Query(1, ge=0)):
    """
    Beam search for a contraction sequence of width at most target.

    Raises:
        HTTPException: If the graph is malformed
    """
    try:
        return GraphService().twinwidth(parse_graph(payload.graph), "heuristic", None, target)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/verify", response_model=WidthReport)
async def verify_sequence(payload: SequencePayload):
    """
    Replay a contraction sequence and report its width.

    Raises:
        HTTPException: If the sequence is malformed or contracts a dead part
    """
    try:
        return GraphService().verify(parse_sequence(payload.sequence))
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
