# tests/test_graded_ring.py
from fractions import Fraction
from itertools import product
import random

import pytest

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
from src.core.graded_ring import (
    format_class,
    format_rational,
    integrate,
    invert_unit,
    multinomial,
    ring_create,
)
from src.core.varieties import grassmannian, projective_space


def test_projective_plane_from_rules():
    ring = ring_create([("h", 1)], 2, [((3,), {})], {(2,): 1})
    h = ring.generator("h")
    assert (h ** 3).is_zero()
    assert integrate(h ** 2) == 1
    assert ring.basis(2) == [(2,)]


def test_leading_monomial_on_both_sides_is_rejected():
    with pytest.raises(NonTerminatingRule):
        ring_create([("s1", 1), ("s2", 2)], 4, [((1, 0), {(1, 0): 1, (0, 1): 1})])


def test_rule_to_larger_monomial_is_rejected():
    with pytest.raises(NonTerminatingRule):
        ring_create([("a", 1), ("b", 1)], 2, [((0, 2), {(2, 0): 1})])


def test_duplicate_generator():
    with pytest.raises(DuplicateGenerator):
        ring_create([("h", 1), ("h", 1)], 2)


def test_inhomogeneous_rule():
    with pytest.raises(InhomogeneousRule):
        ring_create([("a", 1), ("b", 2)], 2, [((0, 1), {(1, 0): 1})])


def test_integration_table_must_be_top_degree():
    with pytest.raises(RingSpecError):
        ring_create([("h", 1)], 2, [((3,), {})], {(1,): 1})


def test_integration_table_keys_are_reduced():
    # two relations of Grass(4,2) plus the degree of s1^4
    rules = [((3, 0), {(1, 1): 2}), ((4, 0), {(2, 1): 3, (0, 2): -1})]
    ring = ring_create([("s1", 1), ("s2", 2)], 4, rules, {(4, 0): 2})
    s1, s2 = ring.gens()
    assert ring.integration_table == {(0, 2): 1}
    assert integrate(s2 ** 2) == 1
    assert integrate(s1 ** 2 * s2) == 1


def test_integration_table_entries_must_agree():
    rules = [((3, 0), {(1, 1): 2}), ((4, 0), {(2, 1): 3, (0, 2): -1})]
    assert ring_create([("s1", 1), ("s2", 2)], 4, rules, {(4, 0): 2, (0, 2): 1}).integration_table == {(0, 2): 1}
    with pytest.raises(RingSpecError):
        ring_create([("s1", 1), ("s2", 2)], 4, rules, {(4, 0): 2, (0, 2): 3})
    with pytest.raises(RingSpecError):
        ring_create([("h", 1)], 2, [((2,), {})], {(2,): 1})


def test_integration_table_must_determine_its_monomials():
    rules = [((2, 0), {(1, 1): 1, (0, 2): 1})]
    ring = ring_create([("a", 1), ("b", 1)], 2, rules, {(2, 0): 1, (0, 2): 0})
    assert ring.integration_table == {(1, 1): 1, (0, 2): 0}
    with pytest.raises(RingSpecError):
        ring_create([("a", 1), ("b", 1)], 2, rules, {(2, 0): 1})


def test_negative_dimension():
    with pytest.raises(RingSpecError):
        ring_create([("h", 1)], -1)


def test_add_and_identity(p2):
    h = p2.h
    assert (1 + h) + h == 1 + 2 * h
    assert (1 + h) + p2.ring.zero() == 1 + h


def test_cubic_stratum_class_times_inverse_normal(p2):
    h = p2.h
    assert (1 + 6 * h + 21 * h ** 2) * (1 - h) - (1 + 5 * h + 15 * h ** 2) == 0
    assert integrate((1 + 6 * h + 21 * h ** 2) * (1 - h)) == 15


def test_mul_truncates(p2):
    h = p2.h
    assert (1 + h + h ** 2) * (1 - h) == 1
    assert (h * h * h).is_zero()
    assert (h * p2.ring.one()) == h


def test_ring_mismatch(p2):
    other = projective_space(3)
    with pytest.raises(RingMismatch):
        p2.h + other.h


def test_invert_unit(p2):
    h = p2.h
    assert invert_unit(1 + h + h ** 2) == 1 - h
    assert invert_unit(p2.ring.one()) == 1
    with pytest.raises(NotAUnit):
        invert_unit(2 + h)


def test_inverse_of_quotient_class_without_relations():
    free = ring_create([("s1", 1), ("s2", 2)], 4)
    s1, s2 = free.gens()
    expected = (
        1 - s1 + (s1 ** 2 - s2) + (2 * s1 * s2 - s1 ** 3)
        + (s2 ** 2 - 3 * s1 ** 2 * s2 + s1 ** 4)
    )
    assert invert_unit(1 + s1 + s2) == expected


def test_grassmannian_4_2_products_and_integrals(g42):
    s1, s2 = g42.ring.gens()
    assert s1 ** 3 == 2 * s1 * s2
    assert (s1 ** 2) * (s1 ** 2) == 2 * s2 ** 2
    assert g42.ring.basis(4) == [(0, 2)]
    assert integrate(s1 ** 4) == 2
    assert integrate(s2 ** 2) == 1
    assert integrate(s1 ** 2 * s2) == 1


def test_grassmannian_5_2_integral(g52):
    s1, s2 = g52.ring.gens()
    assert integrate(s1 ** 6) == 5
    assert integrate(s2 ** 3) == 1


def test_integration_ignores_lower_degrees(p2):
    h = p2.h
    assert integrate(1 + h) == 0
    assert integrate(7 + 3 * h ** 2) == 3


def test_integration_needs_table_entry():
    ring = ring_create([("h", 1)], 2, [((3,), {})])
    with pytest.raises(UnknownTopMonomial):
        integrate(ring.generator("h") ** 2)


def test_point_ring():
    point = ring_create([], 0, (), {(): 1})
    assert integrate(point.scalar(Fraction(7, 3))) == Fraction(7, 3)
    assert point.basis(0) == [()]


def test_multinomial_values():
    assert multinomial(4, [2, 2]) == 6
    assert multinomial(6, [2, 2, 2]) == 90
    assert multinomial(9, [9]) == 1
    with pytest.raises(PartsMismatch):
        multinomial(5, [2, 2])
    with pytest.raises(PartsMismatch):
        multinomial(0, [1, -1])


@pytest.mark.parametrize("length", [1, 2, 3, 4])
def test_multinomial_pascal_identity(length):
    for d in range(1, 13):
        for parts in product(range(d + 1), repeat=length):
            if sum(parts) != d:
                continue
            recursion = sum(
                multinomial(d - 1, [p - 1 if j == i else p for j, p in enumerate(parts)])
                for i in range(length)
                if parts[i] > 0
            )
            assert multinomial(d, list(parts)) == recursion


@pytest.mark.parametrize("preset", [lambda: grassmannian(4, 2), lambda: grassmannian(5, 2), lambda: projective_space(4)])
def test_ring_axioms(preset, rng, make_class):
    ring = preset().ring
    for _ in range(10):
        a, b, c = (make_class(ring, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a - a == 0


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_invert_unit_round_trip(m, rng, make_class):
    for preset in (grassmannian(m, 2), projective_space(m)):
        for _ in range(5):
            a = make_class(preset.ring, rng, unit=True)
            assert a * invert_unit(a) == 1


@pytest.mark.parametrize("m", [4, 5, 6])
def test_reduction_order_does_not_matter(m):
    ring = grassmannian(m, 2).ring
    generator = random.Random(m)
    for a in range(ring.dimension + 1):
        for b in range((ring.dimension - a) // 2 + 1):
            monomial = (a, b)
            expected = ring.normal_form({monomial: 1})
            assert ring.reduce({monomial: 1}) == expected
            for _ in range(5):
                assert ring.reduce({monomial: 1}, rng=generator) == expected


def test_generators_only_build_truncated_classes(g52):
    s1, s2 = g52.ring.gens()
    value = (1 + s1 + s2) ** 9
    assert value.max_degree() <= g52.ring.dimension


def test_format(p2, g42):
    h = p2.h
    assert format_class(1 + 2 * h - h ** 2) == "1 + 2*h - h^2"
    assert format_class(p2.ring.zero()) == "0"
    assert str(-g42.ring.generator("s1")) == "-s1"
    assert format_rational(Fraction(-3, 4)) == "-3/4"
    assert format_rational(Fraction(8, 4)) == "2"
