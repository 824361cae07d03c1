# src/services/commands.py
"""Command implementations shared by the CLI and the HTTP routes.

Each command returns a CommandOutput envelope {command, inputs, result,
breakdown?}; front ends only render it.
"""
from concurrent.futures import Executor
from fractions import Fraction
import logging
from typing import Any, Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel

from src.core.errors import ConfigurationError, IntersectionError, MethodsDisagree
from src.core.graded_ring import format_class, format_rational
from src.core.varieties import euler_characteristic, grassmannian, projective_space
from src.expressions.evaluator import EvaluationContext, evaluate
from src.expressions.parser import Call, parse
from src.services.curve_counts import (
    CountReport,
    lines_direct,
    lines_on_complete_intersection_direct,
    lines_residual,
)
from src.services.euler import euler_residual
from src.services.residual import (
    contribution_coefficients,
    format_segre_monomial,
    ordered_coefficients,
    residual_terms,
)
from src.services.ring_config import (
    bind_bundles,
    BundleContextSpec,
    load_configuration,
    load_context,
    load_bundles,
)

logger = logging.getLogger(__name__)

Method = Literal["direct", "residual", "both"]


class CommandOutput(BaseModel):
    command: str
    inputs: Dict[str, Any]
    result: Any
    breakdown: Optional[Any] = None


def lines_command(
    n: int,
    d: Optional[int] = None,
    ci: Optional[Sequence[int]] = None,
    method: Method = "direct",
    executor: Optional[Executor] = None,
) -> CommandOutput:
    reports: Dict[str, CountReport] = {}
    if ci:
        if d is not None:
            raise ConfigurationError("give either a hypersurface degree or a list of degrees, not both")
        if method != "direct":
            raise IntersectionError("complete intersections support only the direct method")
        reports["direct"] = lines_on_complete_intersection_direct(n, list(ci))
        inputs = {"n": n, "ci": list(ci), "method": method}
    else:
        if d is None:
            raise IntersectionError("give a hypersurface degree or a list of degrees")
        if method in ("direct", "both"):
            reports["direct"] = lines_direct(n, d)
        if method in ("residual", "both"):
            reports["residual"] = lines_residual(n, d, executor)
        inputs = {"n": n, "d": d, "method": method}
    totals = {name: report.total for name, report in reports.items()}
    if len(set(totals.values())) > 1:
        raise MethodsDisagree(f"direct and residual counts differ: {totals}")
    return CommandOutput(
        command="lines",
        inputs=inputs,
        result=totals,
        breakdown={name: [s.model_dump() for s in report.strata] for name, report in reports.items()},
    )


def euler_command(
    grass: Optional[Sequence[int]] = None,
    projective: Optional[int] = None,
    method: Method = "direct",
    executor: Optional[Executor] = None,
) -> CommandOutput:
    """Euler characteristic; the residual method splits off a degenerate tangent section.

    P^n is treated as Grass(n+1, 1) by the residual method.
    """
    if grass is not None:
        m, k = grass
        preset = grassmannian(m, k)
        inputs = {"grass": [m, k], "method": method}
    elif projective is not None:
        m, k = projective + 1, 1
        preset = projective_space(projective)
        inputs = {"projective": projective, "method": method}
    else:
        raise IntersectionError("give a Grassmannian or a projective space")
    totals: Dict[str, int] = {}
    breakdown = None
    if method in ("direct", "both"):
        totals["direct"] = euler_characteristic(preset)
    if method in ("residual", "both"):
        report = euler_residual(m, k, executor)
        totals["residual"] = report.total
        breakdown = [s.model_dump() for s in report.strata]
    if len(set(totals.values())) > 1:
        raise MethodsDisagree(f"direct and residual Euler characteristics differ: {totals}")
    return CommandOutput(
        command="euler", inputs=inputs, result=next(iter(totals.values())), breakdown=breakdown
    )


def table_command(codim: int, components: int, max_degree: int) -> CommandOutput:
    table = contribution_coefficients(codim, components, max_degree)
    return CommandOutput(
        command="table",
        inputs={"codim": codim, "components": components, "max_degree": max_degree},
        result=[
            {"monomial": format_segre_monomial(key), "degree": sum(key), "coefficient": value}
            for key, value in ordered_coefficients(table)
        ],
    )


def _context(ring: str, bundles: Optional[str], bundle_spec: Optional[BundleContextSpec]) -> EvaluationContext:
    context = load_context(ring)
    if bundles:
        context = load_bundles(context, bundles)
    if bundle_spec is not None:
        context = bind_bundles(context, bundle_spec)
    return context


def _render(value) -> str:
    return format_rational(value) if isinstance(value, Fraction) else format_class(value)


def eval_command(
    ring: str,
    expression: str,
    bundles: Optional[str] = None,
    bundle_spec: Optional[BundleContextSpec] = None,
    integrate_only: bool = False,
) -> CommandOutput:
    context = _context(ring, bundles, bundle_spec)
    node = parse(expression)
    if integrate_only:
        node = Call("integrate", (node,))
    value = evaluate(node, context)
    return CommandOutput(
        command="integrate" if integrate_only else "eval",
        inputs={"ring": ring, "expression": expression},
        result=_render(value),
    )


def residual_command(config_path: str, executor: Optional[Executor] = None) -> CommandOutput:
    config = load_configuration(config_path)
    terms = residual_terms(config, executor)
    total = sum((t.subtotal for t in terms), Fraction(0))
    breakdown: List[Dict[str, Any]] = [
        {
            "description": t.description,
            "labels": list(t.labels),
            "multiplicity": t.multiplicity,
            "sign": t.sign,
            "integral": format_rational(t.integral),
            "subtotal": format_rational(t.subtotal),
        }
        for t in terms
    ]
    return CommandOutput(
        command="residual",
        inputs={"config": config_path, "ambient_dimension": config.ambient_dimension},
        result=format_rational(total),
        breakdown=breakdown,
    )
