# src/routes/expressions.py
from fastapi import APIRouter, HTTPException, Request
from pydantic import BaseModel, Field
from typing import Optional

from src.routes.counts import cached_command
from src.services.commands import eval_command
from src.services.ring_config import BundleContextSpec, is_preset_name

router = APIRouter(tags=["expressions"])


class EvalRequest(BaseModel):
    ring: str = Field(..., description="Preset name such as P2 or G(4,2)")
    expression: str
    bundles: Optional[BundleContextSpec] = None
    integrate: bool = False


@router.post("/eval")
async def evaluate_expression(request: Request, body: EvalRequest):
    # ring spec files are a CLI feature; the service only resolves presets
    if not is_preset_name(body.ring):
        raise HTTPException(status_code=400, detail=f"unknown preset {body.ring!r}")
    inputs = body.model_dump(exclude_none=True)
    return await cached_command(
        request,
        "integrate" if body.integrate else "eval",
        inputs,
        lambda: eval_command(
            body.ring, body.expression, bundle_spec=body.bundles, integrate_only=body.integrate
        ),
    )
