# src/services/residual.py
"""Top Chern numbers computed along the components of a degenerate vanishing locus.

For a section whose zero locus splits as Z_1 u ... u Z_M, each non-empty
intersection Z_S = Z_i1 n ... n Z_ik contributes

    -(-1)^k * integral over Z_S of c(E|Z_S) * c(i1, ..., ik)

where c(i1, ..., ik) is the multi-Segre class of the restricted normal bundles.
"""
from concurrent.futures import Executor
from dataclasses import dataclass, field
from fractions import Fraction
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from src.core.bundles import Bundle, bounded_tuples, multi_segre, segre_total
from src.core.errors import (
    ConfigurationError,
    DimensionMismatch,
    RankCodimMismatch,
    RingMismatch,
)
from src.core.graded_ring import (
    ChowRing,
    GradedClass,
    integrate,
    multinomial,
)

logger = logging.getLogger(__name__)

Normal = Tuple[Bundle, int]


@dataclass(frozen=True)
class Stratum:
    labels: Tuple[int, ...]
    ring: ChowRing
    restricted_bundle: Bundle
    normals: Tuple[Normal, ...]
    multiplicity: int = 1
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "normals", tuple((b, int(d)) for b, d in self.normals))
        if not self.labels:
            raise ConfigurationError("a stratum needs at least one component label")
        if len(set(self.labels)) != len(self.labels):
            raise ConfigurationError(f"repeated component labels {self.labels}")
        if len(self.normals) != len(self.labels):
            raise RankCodimMismatch(
                f"{len(self.labels)} labels but {len(self.normals)} normal bundles"
            )
        if self.multiplicity < 1:
            raise ConfigurationError("multiplicity must be positive")
        for bundle in [self.restricted_bundle] + [n for n, _ in self.normals]:
            if bundle.ring is not self.ring and bundle.ring != self.ring:
                raise RingMismatch(f"bundle {bundle} does not live on {self.ring.label}")
        _check_ranks(self.normals)

    @property
    def codimension(self) -> int:
        return sum(d for _, d in self.normals)

    @property
    def sign(self) -> int:
        return -((-1) ** len(self.labels))

    @property
    def label(self) -> str:
        return self.description or f"Z{{{','.join(str(i) for i in self.labels)}}} on {self.ring.label}"


@dataclass(frozen=True)
class VanishingConfiguration:
    ambient_dimension: int
    strata: Tuple[Stratum, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "strata", tuple(self.strata))
        seen = set()
        for stratum in self.strata:
            key = tuple(sorted(stratum.labels))
            if key in seen:
                raise ConfigurationError(f"component set {key} appears in two strata")
            seen.add(key)
            if stratum.ring.dimension != self.ambient_dimension - stratum.codimension:
                raise DimensionMismatch(
                    f"{stratum.label} has dimension {stratum.ring.dimension}, expected "
                    f"{self.ambient_dimension} - {stratum.codimension}"
                )
            if stratum.restricted_bundle.rank != self.ambient_dimension:
                raise DimensionMismatch(
                    f"restricted bundle on {stratum.label} has rank "
                    f"{stratum.restricted_bundle.rank}, expected {self.ambient_dimension}"
                )


@dataclass(frozen=True)
class StratumTerm:
    """One signed summand of the residual formula."""

    description: str
    labels: Tuple[int, ...]
    multiplicity: int
    sign: int
    integral: Fraction

    @property
    def subtotal(self) -> Fraction:
        return self.multiplicity * self.sign * self.integral


def _check_ranks(normals: Sequence[Normal]) -> None:
    for bundle, codim in normals:
        if bundle.rank != codim:
            raise RankCodimMismatch(
                f"normal bundle of rank {bundle.rank} for a component of codimension {codim}"
            )


def contribution(normals: Sequence[Normal], max_degree: int) -> GradedClass:
    """The class c(i1, ..., ik) for the given restricted normal bundles."""
    _check_ranks(normals)
    return multi_segre([bundle for bundle, _ in normals], max_degree)


def lci_chern_number(stratum: Stratum) -> Fraction:
    """Single-component case: integral of c(E|Z) * c(N)^-1."""
    if len(stratum.labels) != 1:
        raise ConfigurationError(f"{stratum.label} is an intersection of {len(stratum.labels)} components")
    (normal, _), = stratum.normals
    return integrate(stratum.restricted_bundle.chern * segre_total(normal))


def _stratum_term(stratum: Stratum) -> StratumTerm:
    correction = contribution(stratum.normals, stratum.ring.dimension)
    integral = integrate(stratum.restricted_bundle.chern * correction)
    logger.info(
        "%s: integral %s, multiplicity %d, sign %+d",
        stratum.label, integral, stratum.multiplicity, stratum.sign,
    )
    return StratumTerm(
        description=stratum.label,
        labels=stratum.labels,
        multiplicity=stratum.multiplicity,
        sign=stratum.sign,
        integral=integral,
    )


def residual_terms(
    config: VanishingConfiguration, executor: Optional[Executor] = None
) -> List[StratumTerm]:
    if executor is None:
        return [_stratum_term(s) for s in config.strata]
    return list(executor.map(_stratum_term, config.strata))


def residual_chern_number(
    config: VanishingConfiguration, executor: Optional[Executor] = None
) -> Fraction:
    terms = residual_terms(config, executor)
    total = sum((t.subtotal for t in terms), Fraction(0))
    logger.info("Residual Chern number over %d strata: %s", len(terms), total)
    return total


# formal contribution table

def contribution_coefficients(d: int, l: int, max_total_degree: int) -> Dict[Tuple[int, ...], int]:
    """Contribution of l components of codimension d with a common normal bundle N.

    Keys are partitions listing the Segre indices of a product, so ``(2, 1)``
    stands for s1(N)*s2(N) and ``()`` for the constant term.
    """
    if d < 1 or l < 1:
        raise ConfigurationError("codimension and component count must be positive")
    table: Dict[Tuple[int, ...], int] = {}
    for ls in bounded_tuples(l, max_total_degree):
        key = tuple(sorted((x for x in ls if x), reverse=True))
        parts = [x + d for x in ls]
        table[key] = table.get(key, 0) + multinomial(sum(parts), parts)
    return table


def format_segre_monomial(key: Tuple[int, ...], symbol: str = "s") -> str:
    if not key:
        return "1"
    factors = []
    for index in sorted(set(key)):
        power = key.count(index)
        factors.append(f"{symbol}{index}" + (f"^{power}" if power > 1 else ""))
    return "*".join(factors)


def ordered_coefficients(table: Dict[Tuple[int, ...], int]) -> List[Tuple[Tuple[int, ...], int]]:
    return sorted(table.items(), key=lambda item: (sum(item[0]), item[0]))


def format_coefficients(table: Dict[Tuple[int, ...], int]) -> str:
    pieces = []
    for key, value in ordered_coefficients(table):
        pieces.append(str(value) if not key else f"{value}*{format_segre_monomial(key)}")
    return " + ".join(pieces) or "0"
