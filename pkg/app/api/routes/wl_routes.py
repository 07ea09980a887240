from fastapi import APIRouter, HTTPException, status, Query

from app.graphs.graph_io import parse_graph
from app.schemas.graph_dto import GraphPairPayload, GraphPayload
from app.schemas.wl_dto import GameVerdict, WlColoringResponse, WlVerdict
from app.services import wl_service
from app.services.graph_service import GraphService

router = APIRouter(prefix="/wl", tags=["Weisfeiler-Leman"])


@router.post("/refine", response_model=WlColoringResponse)
async def refine(payload: GraphPayload, k: int = Query(1, ge=1)):
    """
    Stable k-WL coloring summary.

    Raises:
        HTTPException: If the graph is malformed or n^k exceeds the budget
    """
    try:
        return GraphService().wl_refine(parse_graph(payload.graph), k)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/distinguish", response_model=WlVerdict)
async def distinguish(payload: GraphPairPayload, k: int = Query(1, ge=1)):
    """
    Decide whether k-WL distinguishes two graphs.

    Raises:
        HTTPException: If a graph is malformed or the budget is exceeded
    """
    try:
        return wl_service.wl_distinguish(parse_graph(payload.g), parse_graph(payload.h), k)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/pebble", response_model=GameVerdict)
async def pebble(payload: GraphPairPayload, k: int = Query(2, ge=1)):
    """
    Winner of the bijective k-pebble game.

    Raises:
        HTTPException: If a graph is malformed or the position space is too large
    """
    try:
        return wl_service.pebble_game(parse_graph(payload.g), parse_graph(payload.h), k)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
