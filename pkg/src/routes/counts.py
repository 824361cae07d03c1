# src/routes/counts.py
from fastapi import APIRouter, HTTPException, Query, Request
from fastapi.concurrency import run_in_threadpool
from typing import Any, Callable, Dict, List, Literal
import logging

from src.core.errors import ExpressionError, IntersectionError
from src.routes import metrics
from src.services.commands import (
    CommandOutput,
    euler_command,
    lines_command,
    table_command,
)

router = APIRouter(tags=["counts"])
logger = logging.getLogger(__name__)


async def cached_command(
    request: Request, command: str, inputs: Dict[str, Any], compute: Callable[[], CommandOutput]
) -> Dict[str, Any]:
    """Serve from the redis cache when possible, otherwise compute in a worker thread."""
    cache = getattr(request.app.state, "redis", None)
    if cache is not None:
        cached = await cache.get_result(command, inputs)
        if cached is not None:
            metrics.track_computation(command, cached=True)
            return cached
    try:
        output = await run_in_threadpool(compute)
    except ExpressionError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except IntersectionError as e:
        raise HTTPException(status_code=422, detail=str(e))
    payload = output.model_dump(exclude_none=True)
    metrics.track_computation(command, cached=False)
    if cache is not None:
        await cache.cache_result(command, inputs, payload)
    return payload


@router.get("/lines")
async def lines(
    request: Request,
    n: int = Query(..., ge=1),
    d: int = Query(..., ge=1),
    method: Literal["direct", "residual", "both"] = "direct",
):
    inputs = {"n": n, "d": d, "method": method}
    return await cached_command(request, "lines", inputs, lambda: lines_command(n, d, method=method))


@router.get("/lines/complete-intersection")
async def lines_complete_intersection(
    request: Request,
    n: int = Query(..., ge=1),
    degrees: List[int] = Query(...),
):
    inputs = {"n": n, "ci": degrees}
    return await cached_command(request, "lines", inputs, lambda: lines_command(n, ci=degrees))


@router.get("/euler")
async def euler(
    request: Request,
    m: int = Query(..., ge=0),
    k: int = Query(..., ge=0),
    method: Literal["direct", "residual", "both"] = "direct",
):
    inputs = {"grass": [m, k], "method": method}
    return await cached_command(
        request, "euler", inputs, lambda: euler_command(grass=(m, k), method=method)
    )


@router.get("/table")
async def table(
    request: Request,
    codim: int = Query(..., ge=1),
    components: int = Query(..., ge=1),
    max_degree: int = Query(..., ge=0),
):
    inputs = {"codim": codim, "components": components, "max_degree": max_degree}
    return await cached_command(
        request, "table", inputs, lambda: table_command(codim, components, max_degree)
    )
