# src/services/curve_counts.py
"""Virtual numbers of lines on hypersurfaces and complete intersections in P^n.

Lines in P^n form Grass(n+1, 2). A degree-d hypersurface equation induces a
section of Sym^d Q, whose top Chern class counts the lines on it. The residual
method degenerates the hypersurface into d hyperplanes: the lines inside j of
them form Grass(n+1-j, 2) with normal bundle Q on each component.
"""
from concurrent.futures import Executor
from functools import reduce
import logging
import math
from typing import List, Literal, Optional, Sequence

from pydantic import BaseModel, Field

from src.core.bundles import sym_power, whitney_sum
from src.core.errors import DegreeMismatch, DimensionMismatch
from src.core.graded_ring import integrate, multinomial
from src.core.varieties import as_integer, grassmannian
from src.services.residual import (
    Stratum,
    StratumTerm,
    VanishingConfiguration,
    residual_terms,
)

logger = logging.getLogger(__name__)


class StratumBreakdown(BaseModel):
    description: str
    multiplicity: int
    sign: int
    integral: int
    subtotal: int


class CountReport(BaseModel):
    method: Literal["direct", "residual"]
    total: int
    strata: List[StratumBreakdown] = Field(default_factory=list)


def _check_lines_dimension(n: int, degrees: Sequence[int]) -> None:
    if n < 2:
        raise DimensionMismatch(f"lines need an ambient P^n with n >= 2, got n = {n}")
    if not degrees or any(d < 1 for d in degrees):
        raise DegreeMismatch(f"hypersurface degrees must be positive, got {list(degrees)}")
    rank = sum(d + 1 for d in degrees)
    if rank != 2 * (n - 1):
        raise DimensionMismatch(
            f"rank {rank} of the bundle differs from dim Grass({n + 1},2) = {2 * (n - 1)}"
        )


def _breakdown(term: StratumTerm) -> StratumBreakdown:
    integral = as_integer(term.integral, f"integral over {term.description}")
    return StratumBreakdown(
        description=term.description,
        multiplicity=term.multiplicity,
        sign=term.sign,
        integral=integral,
        subtotal=term.multiplicity * term.sign * integral,
    )


def lines_on_complete_intersection_direct(n: int, degrees: Sequence[int]) -> CountReport:
    _check_lines_dimension(n, degrees)
    grass = grassmannian(n + 1, 2)
    bundle = reduce(whitney_sum, [sym_power(grass.Q, d) for d in degrees])
    total = as_integer(integrate(bundle.top_chern()), "top Chern number")
    label = "+".join(f"Sym^{d}Q" for d in degrees)
    logger.info("Direct count on P%d, degrees %s: %d", n, list(degrees), total)
    return CountReport(
        method="direct",
        total=total,
        strata=[
            StratumBreakdown(
                description=f"c_top({label}) on {grass.ring.label}",
                multiplicity=1,
                sign=1,
                integral=total,
                subtotal=total,
            )
        ],
    )


def lines_direct(n: int, d: int) -> CountReport:
    return lines_on_complete_intersection_direct(n, [d])


def lines_configuration(n: int, d: int) -> VanishingConfiguration:
    """Strata of the section vanishing on d general hyperplanes."""
    _check_lines_dimension(n, [d])
    strata = []
    for j in range(1, min(d, n - 1) + 1):
        grass = grassmannian(n + 1 - j, 2)
        strata.append(
            Stratum(
                labels=tuple(range(1, j + 1)),
                ring=grass.ring,
                restricted_bundle=sym_power(grass.Q, d),
                normals=((grass.Q, 2),) * j,
                multiplicity=math.comb(d, j),
                description=f"{grass.ring.label} in {j} hyperplane(s)",
            )
        )
    return VanishingConfiguration(ambient_dimension=2 * (n - 1), strata=tuple(strata))


def residual_report(
    config: VanishingConfiguration, executor: Optional[Executor] = None
) -> CountReport:
    breakdown = [_breakdown(term) for term in residual_terms(config, executor)]
    total = sum(entry.subtotal for entry in breakdown)
    return CountReport(method="residual", total=total, strata=breakdown)


def lines_residual(n: int, d: int, executor: Optional[Executor] = None) -> CountReport:
    report = residual_report(lines_configuration(n, d), executor)
    logger.info("Residual count on P%d, degree %d: %d", n, d, report.total)
    return report


def point_contribution(codims: Sequence[int]) -> int:
    """Signed contribution of an isolated point where all components meet."""
    k = len(codims)
    return -((-1) ** k) * multinomial(sum(codims), list(codims))
