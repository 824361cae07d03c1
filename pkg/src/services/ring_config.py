# src/services/ring_config.py
"""Structured (JSON) documents for rings, bundle contexts and vanishing configurations."""
from fractions import Fraction
import json
import logging
from pathlib import Path
import re
from typing import List, Optional, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from src.core.bundles import Bundle
from src.core.errors import ConfigurationError, ExpressionError
from src.core.graded_ring import (
    ChowRing,
    Monomial,
    format_rational,
    format_terms,
    ring_create,
)
from src.core.varieties import Preset, grassmannian, projective_space
from src.expressions.evaluator import EvaluationContext, evaluate, evaluate_bundle
from src.expressions.parser import Add, Expression, Mul, Neg, Number, Pow, Sub, Symbol, parse
from src.services.residual import Stratum, VanishingConfiguration

logger = logging.getLogger(__name__)

_PROJECTIVE = re.compile(r"^P\^?(\d+)$")
_GRASSMANNIAN = re.compile(r"^G(?:rass)?\(?(\d+),\s*(\d+)\)?$")
_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?$")


class GeneratorSpec(BaseModel):
    name: str
    degree: int = Field(gt=0)


class RuleSpec(BaseModel):
    lhs: str
    rhs: str = "0"


class IntegrationEntry(BaseModel):
    monomial: str
    value: Union[int, str]


class RingSpec(BaseModel):
    name: Optional[str] = None
    generators: List[GeneratorSpec]
    dimension: int = Field(ge=0)
    rules: List[RuleSpec] = Field(default_factory=list)
    integration: List[IntegrationEntry] = Field(default_factory=list)


class BundleSpec(BaseModel):
    """Either an expression such as ``sym(5, Q)`` or an explicit rank and Chern class."""

    name: Optional[str] = None
    expression: Optional[str] = None
    rank: Optional[int] = Field(default=None, ge=0)
    chern: Optional[str] = None

    @model_validator(mode="after")
    def check_form(self):
        if self.expression is None and (self.rank is None or self.chern is None):
            raise ValueError("a bundle needs either 'expression' or both 'rank' and 'chern'")
        return self


class BundleContextSpec(BaseModel):
    bundles: List[BundleSpec] = Field(default_factory=list)


class NormalSpec(BaseModel):
    bundle: Union[str, BundleSpec]
    codim: int = Field(gt=0)


class StratumSpec(BaseModel):
    ring: Union[str, RingSpec]
    labels: List[int] = Field(min_length=1)
    multiplicity: int = Field(default=1, ge=1)
    restricted_bundle: Union[str, BundleSpec]
    normals: List[NormalSpec]
    description: Optional[str] = None


class VanishingConfigurationSpec(BaseModel):
    ambient_dimension: int = Field(ge=0)
    strata: List[StratumSpec] = Field(default_factory=list)


# monomials and rationals

def parse_monomial(text: str, ring: ChowRing) -> Monomial:
    """Read "s1^2*s2" (or "1") as an exponent vector of ``ring``."""
    exponents = [0] * len(ring.generators)
    text = text.replace(" ", "")
    if text == "1":
        return tuple(exponents)
    for factor in text.split("*"):
        match = _FACTOR.match(factor)
        if match is None or not ring.has_generator(match.group(1)):
            raise ConfigurationError(f"cannot read monomial {text!r} over {ring.label}")
        exponents[ring.index(match.group(1))] += int(match.group(2) or 1)
    return tuple(exponents)


def parse_rational(value: Union[int, str]) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigurationError(f"cannot read rational number {value!r}") from e


# rings

def _degree_bound(node: Expression, ring: ChowRing) -> int:
    """Largest degree a polynomial expression over the generators can reach."""
    if isinstance(node, Number):
        return 0
    if isinstance(node, Symbol):
        return ring.generators[ring.index(node.name)].degree if ring.has_generator(node.name) else 0
    if isinstance(node, (Add, Sub)):
        return max(_degree_bound(node.left, ring), _degree_bound(node.right, ring))
    if isinstance(node, Mul):
        return _degree_bound(node.left, ring) + _degree_bound(node.right, ring)
    if isinstance(node, Pow):
        return _degree_bound(node.base, ring) * node.exponent
    if isinstance(node, Neg):
        return _degree_bound(node.operand, ring)
    raise ConfigurationError(f"rule right-hand sides must be polynomials, found {node.name}(...)")


def ring_from_spec(spec: RingSpec) -> ChowRing:
    generators = [(g.name, g.degree) for g in spec.generators]
    scratch = ring_create(generators, spec.dimension)
    lhs_list = [parse_monomial(rule.lhs, scratch) for rule in spec.rules]
    rhs_list = []
    for rule in spec.rules:
        try:
            rhs_list.append(parse(rule.rhs))
        except ExpressionError as e:
            raise ConfigurationError(f"rule {rule.lhs} -> {rule.rhs}: {e}") from e
    # right-hand sides are read in a ring with no relations that holds every term they can produce
    top = max(
        [spec.dimension]
        + [scratch.degree(m) for m in lhs_list]
        + [_degree_bound(node, scratch) for node in rhs_list]
    )
    free = ring_create(generators, top)
    context = EvaluationContext.from_ring(free)
    rules = []
    for rule, lhs, node in zip(spec.rules, lhs_list, rhs_list):
        try:
            rhs = evaluate(node, context)
        except ExpressionError as e:
            raise ConfigurationError(f"rule {rule.lhs} -> {rule.rhs}: {e}") from e
        rhs_class = free.scalar(rhs) if isinstance(rhs, Fraction) else rhs
        rules.append((lhs, rhs_class.terms))
    table = {
        parse_monomial(entry.monomial, scratch): parse_rational(entry.value)
        for entry in spec.integration
    }
    return ring_create(generators, spec.dimension, rules, table, name=spec.name)


def ring_to_spec(ring: ChowRing) -> RingSpec:
    return RingSpec(
        name=ring.name,
        generators=[GeneratorSpec(name=g.name, degree=g.degree) for g in ring.generators],
        dimension=ring.dimension,
        rules=[
            RuleSpec(lhs=ring.format_monomial(lhs), rhs=format_terms(ring, rhs.items()))
            for lhs, rhs in ring.rewrite_rules
        ],
        integration=[
            IntegrationEntry(monomial=ring.format_monomial(m), value=format_rational(v))
            for m, v in sorted(ring.integration_table.items(), key=lambda item: ring.monomial_key(item[0]), reverse=True)
        ],
    )


def load_preset(name: str) -> Preset:
    """Resolve "P2", "P^4", "G(4,2)", "Grass(5,2)" or "G4,2"."""
    compact = name.replace(" ", "")
    match = _PROJECTIVE.match(compact)
    if match:
        return projective_space(int(match.group(1)))
    match = _GRASSMANNIAN.match(compact)
    if match:
        return grassmannian(int(match.group(1)), int(match.group(2)))
    raise ConfigurationError(f"unknown preset {name!r}; use P<n> or G(<m>,<k>)")


def is_preset_name(name: str) -> bool:
    compact = name.replace(" ", "")
    return bool(_PROJECTIVE.match(compact) or _GRASSMANNIAN.match(compact))


def _read_json(path: Union[str, Path]) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"cannot read {path}: {e}") from e


def _validated(model, data, source: str):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid {source}: {e}") from e


def load_context(reference: Union[str, Path]) -> EvaluationContext:
    """Context for a preset name or a ring spec file."""
    if isinstance(reference, str) and is_preset_name(reference):
        return EvaluationContext.from_preset(load_preset(reference))
    spec = _validated(RingSpec, _read_json(reference), f"ring spec {reference}")
    return EvaluationContext.from_ring(ring_from_spec(spec))


# bundles

def bundle_from_spec(spec: Union[str, BundleSpec], context: EvaluationContext) -> Bundle:
    try:
        if isinstance(spec, str):
            return evaluate_bundle(spec, context)
        if spec.expression is not None:
            return evaluate_bundle(spec.expression, context)
        chern = evaluate(spec.chern, context)
        if isinstance(chern, Fraction):
            chern = context.ring.scalar(chern)
        return Bundle(spec.rank, chern)
    except ExpressionError as e:
        raise ConfigurationError(f"bundle {spec!r}: {e}") from e


def bind_bundles(context: EvaluationContext, spec: BundleContextSpec) -> EvaluationContext:
    """Bind each named bundle in order, so later entries may use earlier ones."""
    for entry in spec.bundles:
        if not entry.name:
            raise ConfigurationError("bundles in a context file need a name")
        context.bind_bundle(entry.name, bundle_from_spec(entry, context))
        logger.debug("Bound bundle %s", entry.name)
    return context


def load_bundles(context: EvaluationContext, path: Union[str, Path]) -> EvaluationContext:
    spec = _validated(BundleContextSpec, _read_json(path), f"bundle context {path}")
    return bind_bundles(context, spec)


# vanishing configurations

def _stratum_context(ring: Union[str, RingSpec]) -> EvaluationContext:
    if isinstance(ring, str):
        return EvaluationContext.from_preset(load_preset(ring))
    return EvaluationContext.from_ring(ring_from_spec(ring))


def configuration_from_spec(spec: VanishingConfigurationSpec) -> VanishingConfiguration:
    strata = []
    for entry in spec.strata:
        context = _stratum_context(entry.ring)
        strata.append(
            Stratum(
                labels=tuple(entry.labels),
                ring=context.ring,
                restricted_bundle=bundle_from_spec(entry.restricted_bundle, context),
                normals=tuple(
                    (bundle_from_spec(n.bundle, context), n.codim) for n in entry.normals
                ),
                multiplicity=entry.multiplicity,
                description=entry.description or "",
            )
        )
    return VanishingConfiguration(ambient_dimension=spec.ambient_dimension, strata=tuple(strata))


def load_configuration(path: Union[str, Path]) -> VanishingConfiguration:
    data = _read_json(path)
    spec = _validated(VanishingConfigurationSpec, data, f"vanishing configuration {path}")
    return configuration_from_spec(spec)


def dump_spec(model: BaseModel) -> str:
    return json.dumps(model.model_dump(exclude_none=True), indent=2, sort_keys=True)
