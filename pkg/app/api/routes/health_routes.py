from fastapi import APIRouter
from datetime import datetime

from app.core.config import settings

router = APIRouter(tags=["Health Check"])


@router.get(
    "/health",
    summary="Health Check",
    description="Check if the API is running",
)
async def health_check():
    """
    Simple health check endpoint to verify:
    - API is responding
    - Current timestamp
    """
    return {
        "status": "healthy",
        "timestamp": datetime.now().isoformat(),
        "version": settings.APP_VERSION,
    }


@router.get("/", summary="API Root", description="Welcome message and API information")
async def root():
    """
    API root endpoint providing basic information about the toolkit.
    """
    return {
        "message": f"Welcome to {settings.APP_NAME} - twin-width and Weisfeiler-Leman toolkit",
        "version": settings.APP_VERSION,
        "docs": "/docs or /redoc",
        "health": "/health",
    }
