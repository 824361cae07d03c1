# src/core/graded_ring.py
"""Truncated graded commutative rings with exact rational coefficients.

A ChowRing is presented by weighted generators, oriented rewrite rules and an
integration table on the top degree. Monomials are exponent vectors aligned
with the generator list; coefficients are ``fractions.Fraction``.
"""
from dataclasses import dataclass
from fractions import Fraction
import logging
import math
import random
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from src.core.errors import (
    DuplicateGenerator,
    InhomogeneousRule,
    NonTerminatingRule,
    NotAUnit,
    PartsMismatch,
    RingMismatch,
    RingSpecError,
    UnknownTopMonomial,
)

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Terms = Dict[Monomial, Fraction]
Scalar = Union[int, Fraction]
Rule = Tuple[Monomial, Terms]


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int


def _times(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _quotient(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _monomials_of_degree(degrees: Sequence[int], target: int) -> List[Monomial]:
    """All exponent vectors of weighted degree ``target``."""
    results: List[Monomial] = []
    prefix: List[int] = []

    def extend(index: int, remaining: int) -> None:
        if index == len(degrees):
            if remaining == 0:
                results.append(tuple(prefix))
            return
        for exponent in range(remaining // degrees[index] + 1):
            prefix.append(exponent)
            extend(index + 1, remaining - exponent * degrees[index])
            prefix.pop()

    extend(0, target)
    return results


def _to_sympy(value: Scalar) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def _from_sympy(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


class ChowRing:
    """Graded ring Q[generators]/(rules), truncated above ``dimension``.

    Construction closes the rules degree by degree: every monomial multiple of
    every relation is row-reduced with pivots at the largest monomial, which
    yields a rule for each non-normal monomial and makes normal forms
    independent of the reduction order.
    """

    def __init__(
        self,
        generators: Sequence[Generator],
        dimension: int,
        rewrite_rules: Sequence[Rule],
        integration_table: Mapping[Monomial, Scalar],
        name: Optional[str] = None,
    ):
        self.generators: Tuple[Generator, ...] = tuple(generators)
        self.dimension = dimension
        self.name = name
        self._degrees = tuple(g.degree for g in self.generators)
        self._index = {g.name: i for i, g in enumerate(self.generators)}
        self.rewrite_rules: Tuple[Rule, ...] = tuple(
            (tuple(lhs), {tuple(m): Fraction(c) for m, c in rhs.items() if c})
            for lhs, rhs in rewrite_rules
        )
        self._check_rules()
        self._close_rules()
        self.integration_table: Dict[Monomial, Fraction] = self._solve_integration_table(
            {tuple(m): Fraction(v) for m, v in integration_table.items()}
        )
        logger.debug(
            "Created ring %s: dimension %d, basis sizes %s",
            self.label, dimension, [len(self._basis[d]) for d in range(dimension + 1)],
        )

    # presentation checks

    def _check_rules(self) -> None:
        for lhs, rhs in self.rewrite_rules:
            if len(lhs) != len(self.generators) or any(len(m) != len(lhs) for m in rhs):
                raise RingSpecError("rule monomials must have one exponent per generator")
            if self.degree(lhs) == 0:
                raise RingSpecError("rule left-hand sides must have positive degree")
            lead_key = self.monomial_key(lhs)
            for m in rhs:
                if not lead_key > self.monomial_key(m):
                    raise NonTerminatingRule(
                        f"rule {self.format_monomial(lhs)} -> ... contains "
                        f"{self.format_monomial(m)}, which is not strictly smaller"
                    )
            for m in rhs:
                if self.degree(m) != self.degree(lhs):
                    raise InhomogeneousRule(
                        f"rule {self.format_monomial(lhs)} -> ... mixes degrees "
                        f"{self.degree(lhs)} and {self.degree(m)}"
                    )

    def _close_rules(self) -> None:
        self._reducers: Dict[Monomial, Terms] = {}
        self._normal_forms: Dict[Monomial, Terms] = {}
        self._basis: Dict[int, List[Monomial]] = {}
        relations = [
            (lhs, rhs) for lhs, rhs in self.rewrite_rules
            if self.degree(lhs) <= self.dimension
        ]
        for delta in range(self.dimension + 1):
            columns = sorted(
                _monomials_of_degree(self._degrees, delta),
                key=self.monomial_key,
                reverse=True,
            )
            position = {m: j for j, m in enumerate(columns)}
            rows = []
            for lhs, rhs in relations:
                shift = delta - self.degree(lhs)
                if shift < 0:
                    continue
                for cofactor in _monomials_of_degree(self._degrees, shift):
                    row = [Fraction(0)] * len(columns)
                    row[position[_times(cofactor, lhs)]] += 1
                    for m, c in rhs.items():
                        row[position[_times(cofactor, m)]] -= c
                    rows.append(row)
            pivots = set()
            if rows:
                reduced, pivot_columns = sympy.Matrix(
                    [[_to_sympy(c) for c in row] for row in rows]
                ).rref()
                for i, p in enumerate(pivot_columns):
                    tail = {}
                    for j, column in enumerate(columns):
                        if j != p and reduced[i, j] != 0:
                            tail[column] = -_from_sympy(reduced[i, j])
                    self._reducers[columns[p]] = tail
                    self._normal_forms[columns[p]] = tail
                    pivots.add(p)
            self._basis[delta] = [m for j, m in enumerate(columns) if j not in pivots]
            for m in self._basis[delta]:
                self._normal_forms[m] = {m: Fraction(1)}

    def _solve_integration_table(self, entries: Mapping[Monomial, Fraction]) -> Dict[Monomial, Fraction]:
        """Values on top-degree normal-form monomials.

        Keys may be any top-degree monomials; each is reduced by the rules and
        the entries are solved jointly. They must agree and determine every
        basis monomial they mention.
        """
        top = self._basis.get(self.dimension, [])
        position = {m: j for j, m in enumerate(top)}
        rows = []
        for m, value in entries.items():
            if len(m) != len(self.generators) or self.degree(m) != self.dimension:
                raise RingSpecError(
                    f"integration table key {self.format_monomial(m)} is not of top degree"
                )
            row = [Fraction(0)] * (len(top) + 1)
            for n, c in self._normal_forms[m].items():
                row[position[n]] += c
            row[-1] = value
            rows.append(row)
        if not rows:
            return {}
        reduced, pivot_columns = sympy.Matrix([[_to_sympy(c) for c in row] for row in rows]).rref()
        if len(top) in pivot_columns:
            raise RingSpecError("integration table contradicts the rewrite rules")
        table: Dict[Monomial, Fraction] = {}
        for i, p in enumerate(pivot_columns):
            if any(reduced[i, j] != 0 for j in range(len(top)) if j != p):
                raise RingSpecError(
                    f"integration table does not determine {self.format_monomial(top[p])}"
                )
            table[top[p]] = _from_sympy(reduced[i, len(top)])
        return table

    # monomials

    @property
    def label(self) -> str:
        return self.name or "ring(" + ",".join(g.name for g in self.generators) + ")"

    def degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self._degrees))

    def monomial_key(self, m: Monomial):
        """Graded reverse-lexicographic key; larger key means larger monomial."""
        return (self.degree(m), tuple(-e for e in reversed(m)))

    def index(self, name: str) -> int:
        return self._index[name]

    def has_generator(self, name: str) -> bool:
        return name in self._index

    def basis(self, degree: int) -> List[Monomial]:
        """Normal-form monomials of the given degree, largest first."""
        if degree < 0 or degree > self.dimension:
            return []
        return list(self._basis[degree])

    def format_monomial(self, m: Monomial) -> str:
        factors = []
        for g, e in zip(self.generators, m):
            if e == 1:
                factors.append(g.name)
            elif e > 1:
                factors.append(f"{g.name}^{e}")
        return "*".join(factors) or "1"

    # normal forms

    def normal_form(self, terms: Mapping[Monomial, Scalar]) -> Terms:
        result: Terms = {}
        for m, c in terms.items():
            if not c or self.degree(m) > self.dimension:
                continue
            for n, d in self._normal_forms[m].items():
                value = result.get(n, 0) + c * d
                if value:
                    result[n] = Fraction(value)
                else:
                    result.pop(n, None)
        return result

    def reduce(self, terms: Mapping[Monomial, Scalar], rng: Optional[random.Random] = None) -> Terms:
        """Rewrite until no monomial is reducible.

        Without ``rng`` the largest reducible monomial is rewritten first; with
        ``rng`` both the monomial and the applicable rule are drawn at random.
        """
        current: Terms = {
            m: Fraction(c) for m, c in terms.items() if c and self.degree(m) <= self.dimension
        }
        rules = list(self._reducers.items()) + [
            (lhs, rhs) for lhs, rhs in self.rewrite_rules if self.degree(lhs) <= self.dimension
        ]
        while True:
            reducible = sorted(
                (m for m in current if any(_divides(lead, m) for lead, _ in rules)),
                key=self.monomial_key,
            )
            if not reducible:
                return current
            if rng is None:
                target = reducible[-1]
                lead, tail = target, self._reducers[target]
            else:
                target = rng.choice(reducible)
                lead, tail = rng.choice([rule for rule in rules if _divides(rule[0], target)])
            coefficient = current.pop(target)
            cofactor = _quotient(target, lead)
            for m, c in tail.items():
                product = _times(cofactor, m)
                if self.degree(product) > self.dimension:
                    continue
                value = current.get(product, 0) + coefficient * c
                if value:
                    current[product] = value
                else:
                    current.pop(product, None)

    # elements

    def element(self, terms: Mapping[Monomial, Scalar]) -> "GradedClass":
        return GradedClass(self, terms)

    def scalar(self, value: Scalar) -> "GradedClass":
        return GradedClass(self, {(0,) * len(self.generators): value})

    def one(self) -> "GradedClass":
        return self.scalar(1)

    def zero(self) -> "GradedClass":
        return GradedClass(self, {})

    def generator(self, name: str) -> "GradedClass":
        i = self._index[name]
        exponents = tuple(1 if j == i else 0 for j in range(len(self.generators)))
        return GradedClass(self, {exponents: 1})

    def gens(self) -> List["GradedClass"]:
        return [self.generator(g.name) for g in self.generators]

    # identity

    def _signature(self):
        return (
            self.generators,
            self.dimension,
            tuple(sorted((lhs, tuple(sorted(rhs.items()))) for lhs, rhs in self.rewrite_rules)),
            tuple(sorted(self.integration_table.items())),
        )

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, ChowRing):
            return NotImplemented
        return self._signature() == other._signature()

    def __hash__(self):
        return hash(self._signature())

    def __repr__(self):
        return f"ChowRing({self.label}, dimension={self.dimension})"


class GradedClass:
    """An element of a ChowRing, stored as normal-form terms."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: ChowRing, terms: Mapping[Monomial, Scalar]):
        self.ring = ring
        self._terms: Terms = ring.normal_form(terms)

    @property
    def terms(self) -> Terms:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self.ring.generators), Fraction(0))

    def max_degree(self) -> int:
        return max((self.ring.degree(m) for m in self._terms), default=-1)

    def component(self, degree: int) -> "GradedClass":
        return GradedClass(
            self.ring, {m: c for m, c in self._terms.items() if self.ring.degree(m) == degree}
        )

    def truncate(self, max_degree: int) -> "GradedClass":
        return GradedClass(
            self.ring, {m: c for m, c in self._terms.items() if self.ring.degree(m) <= max_degree}
        )

    def _coerce(self, other) -> Optional["GradedClass"]:
        if isinstance(other, GradedClass):
            _check_same_ring(self, other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return GradedClass(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else add(other, -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GradedClass(self.ring, {m: c * other for m, c in self._terms.items()})
        other = self._coerce(other)
        return NotImplemented if other is None else mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("classes can only be raised to non-negative integer powers")
        result, base = self.ring.one(), self
        while exponent:
            if exponent & 1:
                result = mul(result, base)
            base = mul(base, base)
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        if not isinstance(other, GradedClass):
            return NotImplemented
        return (self.ring is other.ring or self.ring == other.ring) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __str__(self):
        return format_class(self)

    def __repr__(self):
        return f"GradedClass({format_class(self)})"


def _check_same_ring(a: GradedClass, b: GradedClass) -> None:
    if a.ring is not b.ring and a.ring != b.ring:
        raise RingMismatch(f"classes live in different rings: {a.ring.label} and {b.ring.label}")


def ring_create(
    generators: Iterable[Union[Generator, Tuple[str, int]]],
    dimension: int,
    rewrite_rules: Sequence[Rule] = (),
    integration_table: Optional[Mapping[Monomial, Scalar]] = None,
    name: Optional[str] = None,
) -> ChowRing:
    gens = [g if isinstance(g, Generator) else Generator(*g) for g in generators]
    seen = set()
    for g in gens:
        if g.name in seen:
            raise DuplicateGenerator(f"generator {g.name!r} declared twice")
        if g.degree <= 0:
            raise RingSpecError(f"generator {g.name!r} must have positive degree")
        seen.add(g.name)
    if dimension < 0:
        raise RingSpecError("dimension must be non-negative")
    return ChowRing(gens, dimension, rewrite_rules, integration_table or {}, name=name)


def add(a: GradedClass, b: GradedClass) -> GradedClass:
    _check_same_ring(a, b)
    terms = dict(a.items())
    for m, c in b.items():
        terms[m] = terms.get(m, 0) + c
    return GradedClass(a.ring, terms)


def mul(a: GradedClass, b: GradedClass) -> GradedClass:
    _check_same_ring(a, b)
    ring = a.ring
    terms: Dict[Monomial, Fraction] = {}
    for m, c in a.items():
        for n, d in b.items():
            product = _times(m, n)
            if ring.degree(product) <= ring.dimension:
                terms[product] = terms.get(product, 0) + c * d
    return GradedClass(ring, terms)


def invert_unit(a: GradedClass) -> GradedClass:
    """Inverse of a class with constant term 1, by the geometric series."""
    if a.constant_term() != 1:
        raise NotAUnit(f"constant term of {a} is {a.constant_term()}, not 1")
    nilpotent = a.ring.one() - a
    result, power = a.ring.one(), a.ring.one()
    for _ in range(a.ring.dimension):
        power = mul(power, nilpotent)
        if power.is_zero():
            break
        result = add(result, power)
    return result


def integrate(a: GradedClass) -> Fraction:
    """Degree map: pairs the top-degree component with the integration table."""
    ring = a.ring
    total = Fraction(0)
    for m, c in a.component(ring.dimension).items():
        if m not in ring.integration_table:
            raise UnknownTopMonomial(
                f"no integration value for {ring.format_monomial(m)} on {ring.label}"
            )
        total += c * ring.integration_table[m]
    return total


def multinomial(d: int, parts: Sequence[int]) -> int:
    if any(p < 0 for p in parts) or sum(parts) != d:
        raise PartsMismatch(f"parts {list(parts)} do not sum to {d}")
    return math.factorial(d) // math.prod(math.factorial(p) for p in parts)


def format_rational(value: Scalar) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_class(a: GradedClass) -> str:
    """Degree-ascending text with explicit '*' and '^', re-parseable."""
    return format_terms(a.ring, a.items())


def format_terms(ring: ChowRing, terms: Iterable[Tuple[Monomial, Scalar]]) -> str:
    ordered = sorted(
        ((m, c) for m, c in terms if c),
        key=lambda item: (ring.degree(item[0]), tuple(-x for x in ring.monomial_key(item[0])[1])),
    )
    pieces: List[str] = []
    for m, c in ordered:
        magnitude = abs(c)
        if ring.degree(m) == 0:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = ring.format_monomial(m)
        else:
            body = f"{format_rational(magnitude)}*{ring.format_monomial(m)}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(pieces) or "0"
