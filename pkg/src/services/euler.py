# src/services/euler.py
"""Euler characteristics of Grassmannians from a degenerate section of the tangent bundle.

Splitting C^m = C + C^(m-1) gives a section of Hom(K, Q) = T whose zero locus
is the disjoint union of Grass(m-1, k) (the line C lies in K) and
Grass(m-1, k-1) (the line C maps onto a summand of Q). Both pieces are smooth,
so each one is a single-component stratum of the residual formula.
"""
from concurrent.futures import Executor
import logging
from typing import Optional

from src.core.bundles import dual, whitney_sum
from src.core.errors import DimensionMismatch
from src.core.varieties import grassmannian
from src.services.curve_counts import CountReport, residual_report
from src.services.residual import Stratum, VanishingConfiguration

logger = logging.getLogger(__name__)


def euler_configuration(m: int, k: int, general: Optional[bool] = None) -> VanishingConfiguration:
    if not 0 < k < m:
        raise DimensionMismatch(
            f"Grass({m},{k}) is a point or empty; a degenerate tangent section needs 0 < k < m"
        )
    inside = grassmannian(m - 1, k, general)
    onto = grassmannian(m - 1, k - 1, general)
    # T|Grass(m-1,k) = T' + Q' and T|Grass(m-1,k-1) = T' + K'^*
    dual_kernel = dual(onto.K)
    strata = (
        Stratum(
            labels=(1,),
            ring=inside.ring,
            restricted_bundle=whitney_sum(inside.tangent_bundle(), inside.Q),
            normals=((inside.Q, k),),
            description=f"{inside.ring.label}, line in K",
        ),
        Stratum(
            labels=(2,),
            ring=onto.ring,
            restricted_bundle=whitney_sum(onto.tangent_bundle(), dual_kernel),
            normals=((dual_kernel, m - k),),
            description=f"{onto.ring.label}, line onto Q",
        ),
    )
    return VanishingConfiguration(ambient_dimension=k * (m - k), strata=strata)


def euler_residual(m: int, k: int, executor: Optional[Executor] = None) -> CountReport:
    report = residual_report(euler_configuration(m, k), executor)
    logger.info("Euler characteristic of Grass(%d,%d) from the tangent section: %d", m, k, report.total)
    return report
