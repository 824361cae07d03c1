# src/core/varieties.py
"""Preset Chow rings: projective spaces and Grassmannians of quotients."""
from fractions import Fraction
from functools import lru_cache
import logging
from typing import Dict, List, Optional, Union

from src.config.settings import get_settings
from src.core.bundles import Bundle, dual, line_bundle, tensor
from src.core.errors import DimensionMismatch, NonIntegerResult, Unsupported
from src.core.graded_ring import (
    GradedClass,
    Rule,
    integrate,
    invert_unit,
    ring_create,
)
from src.core.schubert import schubert_integral_oracle

logger = logging.getLogger(__name__)


class ProjectiveSpacePreset:
    def __init__(self, n: int):
        if n < 0:
            raise DimensionMismatch(f"projective space dimension must be non-negative, got {n}")
        self.n = n
        self.ring = ring_create(
            [("h", 1)], n, [((n + 1,), {})], {(n,): 1}, name=f"P{n}"
        )

    @property
    def h(self) -> GradedClass:
        return self.ring.generator("h")

    def O(self, d: int) -> Bundle:
        return line_bundle(self.ring, self.h * d).named(f"O({d})")

    def tangent_bundle(self) -> Bundle:
        return Bundle(self.n, (1 + self.h) ** (self.n + 1), name="T")

    def symbols(self) -> Dict[str, GradedClass]:
        return {"h": self.h}

    def bundles(self) -> Dict[str, Bundle]:
        return {"O1": self.O(1), "T": self.tangent_bundle()}

    def __repr__(self):
        return f"ProjectiveSpacePreset(n={self.n})"


class GrassmannianPreset:
    """Grass(m, k): rank-k quotients of C^m, with c(Q) = 1 + s1 + ... + sk."""

    def __init__(self, m: int, k: int):
        self.m = m
        self.k = k
        self.relations = grassmannian_relations(m, k)
        generators = [(f"s{i}", i) for i in range(1, k + 1)]
        dimension = k * (m - k)
        rules = [_orient(relation) for relation in self.relations]
        bare = ring_create(generators, dimension, rules)
        table = {
            monomial: schubert_integral_oracle(m, k, monomial)
            for monomial in bare.basis(dimension)
        }
        self.ring = ring_create(generators, dimension, rules, table, name=f"G({m},{k})")
        self.Q = Bundle(k, 1 + sum(self.ring.gens(), self.ring.zero()), name="Q")
        self.K = Bundle(m - k, invert_unit(self.Q.chern), name="K")

    def tangent_bundle(self) -> Bundle:
        return tensor(dual(self.K), self.Q).named("T")

    def symbols(self) -> Dict[str, GradedClass]:
        return {g.name: self.ring.generator(g.name) for g in self.ring.generators}

    def bundles(self) -> Dict[str, Bundle]:
        return {"Q": self.Q, "K": self.K, "T": self.tangent_bundle()}

    def __repr__(self):
        return f"GrassmannianPreset(m={self.m}, k={self.k})"


Preset = Union[ProjectiveSpacePreset, GrassmannianPreset]


def grassmannian_relations(m: int, k: int) -> List[GradedClass]:
    """Degree m-k+1 .. m parts of c(Q)^-1, computed with no relations imposed."""
    free = ring_create([(f"s{i}", i) for i in range(1, k + 1)], m)
    inverse = invert_unit(1 + sum(free.gens(), free.zero()))
    relations = [inverse.component(degree) for degree in range(m - k + 1, m + 1)]
    return [r for r in relations if not r.is_zero()]


def _orient(relation: GradedClass) -> Rule:
    """Turn a homogeneous relation into a rule rewriting its largest monomial."""
    ring = relation.ring
    lead = max((m for m, _ in relation.items()), key=ring.monomial_key)
    scale = relation.terms[lead]
    tail = {m: -c / scale for m, c in relation.items() if m != lead}
    return lead, tail


@lru_cache(maxsize=None)
def projective_space(n: int) -> ProjectiveSpacePreset:
    return ProjectiveSpacePreset(n)


def grassmannian(m: int, k: int, general: Optional[bool] = None) -> GrassmannianPreset:
    if not 0 <= k <= m:
        raise DimensionMismatch(f"Grass({m},{k}) needs 0 <= k <= m")
    if general is None:
        general = get_settings().GENERAL_GRASSMANNIANS
    if k > 2 and not general:
        raise Unsupported(
            f"Grass({m},{k}) has quotient rank {k}; set GENERAL_GRASSMANNIANS to enable k > 2"
        )
    return _grassmannian(m, k)


@lru_cache(maxsize=None)
def _grassmannian(m: int, k: int) -> GrassmannianPreset:
    logger.debug("Building Grass(%d,%d)", m, k)
    return GrassmannianPreset(m, k)


def tangent_bundle(preset: Preset) -> Bundle:
    return preset.tangent_bundle()


def as_integer(value: Fraction, what: str) -> int:
    if Fraction(value).denominator != 1:
        raise NonIntegerResult(f"{what} is {value}, expected an integer")
    return int(value)


def euler_characteristic(preset: Preset) -> int:
    tangent = preset.tangent_bundle()
    return as_integer(integrate(tangent.top_chern()), f"Euler characteristic of {preset.ring.label}")
