from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
import uvicorn
from app.core.config import settings
from app.core.logging import configure_logging
from app.api.routes import (
    health_routes,
    graph_routes,
    tww_routes,
    wl_routes,
    analyze_routes,
    experiment_routes,
)

configure_logging()

# Define tags metadata for Swagger documentation
tags_metadata = [
    {
        "name": "Graphs",
        "description": "Generation, canonical forms, isomorphism, twin-width-1 recognition and modular decomposition.",
    },
    {
        "name": "Twin-width",
        "description": "Exact and heuristic twin-width search and contraction-sequence verification.",
    },
    {
        "name": "Weisfeiler-Leman",
        "description": "k-WL refinement, pair distinguishing and the bijective pebble game.",
    },
    {
        "name": "Structure Analysis",
        "description": "Partial half-graphs, GF(2) ranks, matchings, bicliques and red-cut audits.",
    },
    {
        "name": "Experiments",
        "description": "Reproducible experiment pipelines with JSON reports.",
    },
    {
        "name": "Health Check",
        "description": "System status and health monitoring endpoints.",
    },
]

app = FastAPI(
    title=settings.APP_NAME,
    description="""
    **TwinWL** is a graph toolkit around twin-width and Weisfeiler-Leman refinement:

    * **Twin-width**: contraction sequences, exact branch and bound, heuristics
    * **Twin-width 1**: recognition, canonical forms and isomorphism
    * **Modular decomposition**: prime, series and parallel trees
    * **Weisfeiler-Leman**: k-dimensional refinement and the bijective pebble game
    * **Generators**: half-graphs, CFI pairs, subdivisions, random twin-width-1 graphs

    ## Graph format
    Bodies carry graphs as text: a `p graph n m` header, optional `c v color`
    lines and one `e u v` line per edge; sequences append `m a b` merge lines.
    """,
    version=settings.APP_VERSION,
    license_info={
        "name": "MIT License",
        "url": "https://opensource.org/licenses/MIT",
    },
    debug=settings.APP_DEBUG,
    openapi_tags=tags_metadata,
)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.ALLOWED_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(health_routes.router)
app.include_router(graph_routes.router)
app.include_router(tww_routes.router)
app.include_router(wl_routes.router)
app.include_router(analyze_routes.router)
app.include_router(experiment_routes.router)

if __name__ == "__main__":
    uvicorn.run("app.main:app", host="0.0.0.0", port=8000, reload=True)
