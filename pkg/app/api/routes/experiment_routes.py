from fastapi import APIRouter, HTTPException, status
from typing import List

from app.repositories.graph_file_repository import GraphFileRepository
from app.schemas.experiment_dto import ExperimentReport, ExperimentSpec
from app.services.experiment_service import ExperimentService

router = APIRouter(prefix="/experiments", tags=["Experiments"])


@router.post("/", response_model=ExperimentReport)
async def run_experiment(spec: ExperimentSpec):
    """
    Run an experiment pipeline.

    Args:
        spec (ExperimentSpec): Validated experiment parameters; output selects
        the directory for the report and any counterexample bundle

    Returns:
        ExperimentReport: Per-sample outcomes in index order and a summary

    Raises:
        HTTPException: If a guard refuses a sample
    """
    repository = GraphFileRepository(spec.output) if spec.output else None
    try:
        return ExperimentService(repository).run_experiment(spec)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.get("/bundles", response_model=List[str])
async def list_bundles():
    """
    List counterexample bundles under OUTPUT_DIR.
    """
    return GraphFileRepository().list_bundles()
