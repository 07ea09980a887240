from fastapi import APIRouter, HTTPException, status

from app.graphs.graph_io import parse_graph, parse_sequence
from app.schemas.analysis_dto import (
    BicliqueResult,
    BipartitePayload,
    HalfGraphCheck,
    HalfGraphWitness,
    MatchingResult,
    RankPayload,
    RankResult,
    RedCutAudit,
)
from app.schemas.graph_dto import SequencePayload
from app.services import structure_service
from app.services.graph_service import GraphService

router = APIRouter(prefix="/analyze", tags=["Structure Analysis"])


def _view(payload: BipartitePayload):
    return GraphService.bipartite(parse_graph(payload.graph), payload.left, payload.right)


@router.post("/chain", response_model=HalfGraphCheck)
async def partial_half_graph(payload: BipartitePayload):
    """
    Recognise a partial half-graph and return its embedding or an incomparable pair.

    Raises:
        HTTPException: If the graph is malformed or the sides overlap
    """
    try:
        return structure_service.is_partial_half_graph(_view(payload))
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/halfgraph", response_model=HalfGraphWitness)
async def induced_half_graph(payload: BipartitePayload):
    """
    Largest semi-induced half-graph of a partial half-graph.

    Raises:
        HTTPException: If the input is not a partial half-graph
    """
    try:
        return structure_service.max_induced_half_graph(_view(payload))
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/biclique", response_model=BicliqueResult)
async def balanced_biclique(payload: BipartitePayload):
    """
    Largest balanced biclique of a partial half-graph.

    Raises:
        HTTPException: If the input is not a partial half-graph
    """
    try:
        return structure_service.max_balanced_biclique_chain(_view(payload))
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/matching", response_model=MatchingResult)
async def matching(payload: BipartitePayload):
    """
    Maximum matching between the two sides.

    Raises:
        HTTPException: If the graph is malformed or the sides overlap
    """
    try:
        return structure_service.max_matching(_view(payload))
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/rank", response_model=RankResult)
async def rank(payload: RankPayload):
    """
    GF(2) biadjacency rank of A and B, or their rank-connectivity.

    Raises:
        HTTPException: If the sets overlap or the graph exceeds the cut-enumeration guard
    """
    service = GraphService()
    try:
        g = parse_graph(payload.graph)
        if payload.connectivity:
            return service.rank_connectivity(g, payload.a, payload.b)
        return service.rank(g, payload.a, payload.b)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/audit", response_model=RedCutAudit)
async def audit(payload: SequencePayload):
    """
    Audit every pair of parts of a width-1 contraction sequence.

    Raises:
        HTTPException: If the sequence is malformed or has width above 1
    """
    try:
        s = parse_sequence(payload.sequence)
        return structure_service.audit_red_cuts(s.base, s)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
