# src/core/bundles.py
"""Vector-bundle class algebra over a ChowRing.

Symmetric powers and tensor products go through the splitting principle: a
scratch sympy polynomial ring adjoins degree-1 Chern roots for each bundle, the
total Chern class of the new bundle is expanded in the roots, and the symmetric
result is rewritten into elementary symmetric polynomials before the
substitution e_i -> c_i(E) brings it back into the base ring.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
import logging
import math
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import ZZ
from sympy.polys.orderings import lex
from sympy.polys.rings import xring

from src.core.errors import DegreeMismatch, InvalidBundle, RingMismatch, SymmetryError
from src.core.graded_ring import ChowRing, GradedClass, invert_unit, multinomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bundle:
    rank: int
    chern: GradedClass
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.rank < 0:
            raise InvalidBundle(f"rank must be non-negative, got {self.rank}")
        if self.chern.constant_term() != 1:
            raise InvalidBundle(f"total Chern class {self.chern} does not start with 1")
        if self.chern.max_degree() > min(self.rank, self.ring.dimension):
            raise InvalidBundle(
                f"total Chern class {self.chern} has terms above the rank {self.rank}"
            )

    @property
    def ring(self) -> ChowRing:
        return self.chern.ring

    def chern_class(self, k: int) -> GradedClass:
        return self.chern.component(k)

    def top_chern(self) -> GradedClass:
        return self.chern.component(self.rank)

    def named(self, name: str) -> "Bundle":
        return Bundle(self.rank, self.chern, name)

    def __str__(self):
        label = f"{self.name}: " if self.name else ""
        return f"{label}rank {self.rank}, c = {self.chern}"


def trivial(ring: ChowRing, rank: int) -> Bundle:
    return Bundle(rank, ring.one())


def line_bundle(ring: ChowRing, first_chern: GradedClass) -> Bundle:
    return Bundle(1, ring.one() + first_chern.component(1))


def _common_ring(bundles: Sequence[Bundle]) -> ChowRing:
    if not bundles:
        raise InvalidBundle("at least one bundle is required")
    ring = bundles[0].ring
    for bundle in bundles[1:]:
        if bundle.ring is not ring and bundle.ring != ring:
            raise RingMismatch(
                f"bundles live on different rings: {ring.label} and {bundle.ring.label}"
            )
    return ring


def segre_total(bundle: Bundle) -> GradedClass:
    return invert_unit(bundle.chern)


def segre_class(bundle: Bundle, k: int) -> GradedClass:
    return segre_total(bundle).component(k)


def dual(bundle: Bundle) -> Bundle:
    ring = bundle.ring
    terms = {m: (-c if ring.degree(m) % 2 else c) for m, c in bundle.chern.items()}
    return Bundle(bundle.rank, ring.element(terms))


def whitney_sum(first: Bundle, second: Bundle) -> Bundle:
    _common_ring([first, second])
    return Bundle(first.rank + second.rank, first.chern * second.chern)


class RootSystem:
    """Scratch polynomial ring with one block of Chern roots per bundle."""

    def __init__(self, bundles: Sequence[Bundle], max_degree: int):
        self.bundles = list(bundles)
        self.base = _common_ring(self.bundles)
        self.max_degree = max_degree
        names = [f"x{i}_{j}" for i, b in enumerate(self.bundles) for j in range(b.rank)]
        self.poly_ring, flat = xring(names, ZZ, lex)
        self.nvars = len(names)
        self.roots: List[list] = []
        self._blocks: List[Tuple[int, int]] = []
        offset = 0
        for bundle in self.bundles:
            self.roots.append(list(flat[offset:offset + bundle.rank]))
            self._blocks.append((offset, bundle.rank))
            offset += bundle.rank
        self._products: Dict[Tuple[int, Tuple[int, ...]], Dict[Tuple[int, ...], int]] = {}
        self._powers: Dict[Tuple[int, int, int], GradedClass] = {}

    def truncate(self, poly):
        return self.poly_ring.from_dict(
            {m: c for m, c in poly.items() if sum(m) <= self.max_degree}
        )

    def total_chern(self, roots) -> object:
        """Product of (1 + root) over the given linear forms, truncated."""
        result = self.poly_ring.one
        for root in roots:
            result = self.truncate(result * (self.poly_ring.one + root))
        return result

    def to_base(self, poly) -> GradedClass:
        expansion = self._elementary({m: int(c) for m, c in poly.items()}, 0)
        result = self.base.zero()
        for key, coefficient in expansion.items():
            term = self.base.scalar(coefficient)
            for block, exponents in enumerate(key):
                for i, e in enumerate(exponents, start=1):
                    if e:
                        term = term * self._chern_power(block, i, e)
            result = result + term
        return result

    def _chern_power(self, block: int, i: int, e: int) -> GradedClass:
        key = (block, i, e)
        if key not in self._powers:
            self._powers[key] = self.bundles[block].chern_class(i) ** e
        return self._powers[key]

    def _elementary_product(self, block: int, exponents: Tuple[int, ...]) -> Dict[Tuple[int, ...], int]:
        """e_1^a1 * e_2^a2 * ... in the roots of one block, keyed by local exponents."""
        key = (block, exponents)
        if key not in self._products:
            start, size = self._blocks[block]
            roots = self.roots[block]
            one = self.poly_ring.one
            product = one
            for i, a in enumerate(exponents, start=1):
                e_i = sum((math.prod(c, start=one) for c in combinations(roots, i)), self.poly_ring.zero)
                for _ in range(a):
                    product = product * e_i
            self._products[key] = {m[start:start + size]: int(c) for m, c in product.items()}
        return self._products[key]

    def _elementary(self, poly: Dict[Tuple[int, ...], int], block: int) -> Dict[tuple, int]:
        """Rewrite ``poly`` in elementary symmetric polynomials, block by block.

        Keys of the result are tuples with one e-exponent vector per block.
        """
        if block == len(self.bundles):
            if any(c and any(m) for m, c in poly.items()):
                raise SymmetryError("root polynomial left a non-constant residue")
            constant = poly.get((0,) * self.nvars, 0)
            return {(): constant} if constant else {}
        start, size = self._blocks[block]
        remaining = {m: c for m, c in poly.items() if c}
        result: Dict[tuple, int] = {}
        while remaining:
            lead = max(m[start:start + size] for m in remaining)
            if any(lead[i] < lead[i + 1] for i in range(size - 1)):
                raise SymmetryError(
                    f"leading root exponent {lead} of block {block} is not a partition"
                )
            coefficient = {
                m[:start] + (0,) * size + m[start + size:]: c
                for m, c in remaining.items()
                if m[start:start + size] == lead
            }
            exponents = tuple(
                lead[i] - (lead[i + 1] if i + 1 < size else 0) for i in range(size)
            )
            for local, a in self._elementary_product(block, exponents).items():
                for other, c in coefficient.items():
                    m = other[:start] + local + other[start + size:]
                    value = remaining.get(m, 0) - a * c
                    if value:
                        remaining[m] = value
                    else:
                        remaining.pop(m, None)
            for key, value in self._elementary(coefficient, block + 1).items():
                combined = (exponents,) + key
                total = result.get(combined, 0) + value
                if total:
                    result[combined] = total
                else:
                    result.pop(combined, None)
        return result


def sym_power(bundle: Bundle, d: int) -> Bundle:
    if d < 1:
        raise DegreeMismatch(f"symmetric power degree must be positive, got {d}")
    if bundle.rank < 1:
        raise InvalidBundle("symmetric powers need a bundle of positive rank")
    if d == 1:
        return bundle
    rank = math.comb(bundle.rank + d - 1, d)
    system = RootSystem([bundle], min(rank, bundle.ring.dimension))
    roots = [
        sum(combo, system.poly_ring.zero)
        for combo in combinations_with_replacement(system.roots[0], d)
    ]
    chern = system.to_base(system.total_chern(roots))
    logger.debug("Sym^%d of rank %d bundle: c = %s", d, bundle.rank, chern)
    return Bundle(rank, chern)


def tensor(first: Bundle, second: Bundle) -> Bundle:
    ring = _common_ring([first, second])
    rank = first.rank * second.rank
    if rank == 0:
        return trivial(ring, 0)
    system = RootSystem([first, second], min(rank, ring.dimension))
    roots = [x + y for x in system.roots[0] for y in system.roots[1]]
    return Bundle(rank, system.to_base(system.total_chern(roots)))


def bounded_tuples(length: int, total: int) -> Iterator[Tuple[int, ...]]:
    """Tuples of ``length`` non-negative integers with sum at most ``total``."""
    if length == 0:
        yield ()
        return
    for head in range(total + 1):
        for tail in bounded_tuples(length - 1, total - head):
            yield (head,) + tail


def _compositions(total: int, length: int) -> Iterator[Tuple[int, ...]]:
    """Tuples of ``length`` non-negative integers summing to exactly ``total``."""
    if length == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, length - 1):
            yield (head,) + tail


def multi_segre(bundles: Sequence[Bundle], max_degree: int) -> GradedClass:
    """Total multi-Segre class as a multinomial combination of single Segre classes."""
    ring = _common_ring(bundles)
    top = min(max_degree, ring.dimension)
    components = [
        [segre_total(b).component(j) for j in range(top + 1)] for b in bundles
    ]
    result = ring.zero()
    for ls in bounded_tuples(len(bundles), top):
        factors = [components[i][l] for i, l in enumerate(ls)]
        if any(f.is_zero() for f in factors):
            continue
        parts = [l + b.rank for l, b in zip(ls, bundles)]
        term = ring.scalar(multinomial(sum(parts), parts))
        for factor in factors:
            term = term * factor
        result = result + term
    return result


def multi_segre_pushforward(bundles: Sequence[Bundle], max_degree: int) -> GradedClass:
    """Multi-Segre class from the pushforward along the fibre product of P(E_i + O).

    s_l = (-1)^l pi_*((xi_1 + ... + xi_k)^(r + l)), with
    pi_*(xi_i^a) = (-1)^(a - r_i) s_(a - r_i)(E_i), zero when a < r_i.
    """
    ring = _common_ring(bundles)
    top = min(max_degree, ring.dimension)
    ranks = [b.rank for b in bundles]
    relative_dimension = sum(ranks)
    segres = [segre_total(b) for b in bundles]
    result = ring.zero()
    for l in range(top + 1):
        power = relative_dimension + l
        layer = ring.zero()
        for exponents in _compositions(power, len(bundles)):
            if any(a < r for a, r in zip(exponents, ranks)):
                continue
            term = ring.scalar(multinomial(power, exponents))
            for a, r, segre in zip(exponents, ranks, segres):
                term = term * (Fraction((-1) ** (a - r)) * segre.component(a - r))
            layer = layer + term
        result = result + Fraction((-1) ** l) * layer
    return result
