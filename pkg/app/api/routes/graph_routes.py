from fastapi import APIRouter, HTTPException, status, Query
from typing import List, Optional

from app.graphs.graph_io import parse_graph, render_graph
from app.schemas.graph_dto import (
    CanonResponse,
    CsResponse,
    GenerateRequest,
    GraphPairPayload,
    GraphPayload,
    GraphResponse,
    IsoResponse,
    RecognizeResponse,
)
from app.schemas.modular_dto import ModTree
from app.services.graph_service import GraphService

router = APIRouter(prefix="/graphs", tags=["Graphs"])


@router.post("/generate", response_model=GraphResponse)
async def generate_graph(request: GenerateRequest):
    """
    Generate a graph from one of the instance families.

    Args:
        request (GenerateRequest): Family and parameters

    Returns:
        GraphResponse: The graph text with its order and size

    Raises:
        HTTPException: If the parameters are invalid
    """
    try:
        g = GraphService().generate(request)
        return GraphResponse(graph=render_graph(g), n=g.n, m=g.m)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/canon", response_model=CanonResponse)
async def canonical_form(payload: GraphPayload):
    """
    Canonical form of a graph of twin-width at most 1.

    Raises:
        HTTPException: If the graph is malformed or has twin-width above 1
    """
    try:
        return GraphService().canon(parse_graph(payload.graph))
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/cs", response_model=CsResponse)
async def cs_string(
    payload: GraphPayload,
    start: Optional[List[int]] = Query(None, description="Start pair u, v; omit for the invariant"),
):
    """
    cs string of a prime graph from a start pair, or its lex-min invariant.

    Raises:
        HTTPException: If the input is malformed
    """
    try:
        if start is not None and len(start) != 2:
            raise ValueError("start takes exactly two vertices")
        return GraphService().cs(parse_graph(payload.graph), start)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/iso", response_model=IsoResponse)
async def isomorphism(
    payload: GraphPairPayload,
    oracle: bool = Query(False, description="Use VF2++ instead of canonical forms"),
):
    """
    Isomorphism test with a mapping when the graphs are isomorphic.

    Raises:
        HTTPException: If a graph is malformed, or has twin-width above 1 without oracle
    """
    try:
        return GraphService().iso(parse_graph(payload.g), parse_graph(payload.h), oracle=oracle)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/recognize", response_model=RecognizeResponse)
async def recognize_tww1(payload: GraphPayload):
    """
    Decide twin-width at most 1 and return a width-1 certificate.

    Raises:
        HTTPException: If the graph is malformed
    """
    try:
        return GraphService().recognize(parse_graph(payload.graph))
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/modtree", response_model=ModTree)
async def modular_decomposition(payload: GraphPayload):
    """
    Modular decomposition tree.

    Raises:
        HTTPException: If the graph is malformed or empty
    """
    try:
        return GraphService().modtree(parse_graph(payload.graph))
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
