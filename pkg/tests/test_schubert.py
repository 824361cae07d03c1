# tests/test_schubert.py
from math import comb

import pytest

from src.core.errors import DegreeMismatch
from src.core.graded_ring import integrate
from src.core.schubert import (
    box,
    pieri_product,
    schubert_expansion,
    schubert_integral_oracle,
    vertical_strips,
)
from src.core.varieties import grassmannian


def lattice_paths(a, b):
    """Monotone paths staying weakly below the diagonal: the ballot number."""
    if b > a:
        return 0
    if b == 0:
        return 1
    return lattice_paths(a - 1, b) + lattice_paths(a, b - 1)


def test_vertical_strips_fit_the_box():
    assert sorted(vertical_strips((1, 0), 1, 2)) == [(1, 1), (2, 0)]
    assert list(vertical_strips((2, 0), 1, 2)) == [(2, 1)]
    assert list(vertical_strips((1, 1), 2, 2)) == [(2, 2)]
    assert list(vertical_strips((2, 2), 1, 2)) == []


def test_pieri_rule_for_rank_two():
    assert pieri_product({(1, 0): 1}, 1, 4, 2) == {(2, 0): 1, (1, 1): 1}
    assert pieri_product({(1, 0): 1}, 2, 4, 2) == {(2, 1): 1}


def test_expansion_of_sigma1_squared():
    assert schubert_expansion(4, 2, (2, 0)) == {(2, 0): 1, (1, 1): 1}


@pytest.mark.parametrize(
    "m, exponents, expected",
    [
        (4, (4, 0), 2),
        (4, (0, 2), 1),
        (4, (2, 1), 1),
        (5, (6, 0), 5),
        (5, (0, 3), 1),
    ],
)
def test_oracle_values(m, exponents, expected):
    assert schubert_integral_oracle(m, 2, exponents) == expected


@pytest.mark.parametrize("m", range(2, 9))
def test_sigma1_power_is_catalan(m):
    n = m - 2
    catalan = comb(2 * n, n) // (n + 1)
    assert schubert_integral_oracle(m, 2, (2 * n, 0)) == catalan
    assert lattice_paths(n, n) == catalan


def test_oracle_rejects_wrong_degree():
    with pytest.raises(DegreeMismatch):
        schubert_integral_oracle(4, 2, (3, 0))
    with pytest.raises(DegreeMismatch):
        schubert_integral_oracle(4, 2, (4,))


def test_point_grassmannians():
    assert schubert_integral_oracle(3, 0, ()) == 1
    assert schubert_integral_oracle(2, 2, (0, 0)) == 1
    assert box(2, 2) == (0, 0)


def test_general_rank_oracle():
    # Grass(5,3) and Grass(5,2) are dual: sigma1^6 has the same degree
    assert schubert_integral_oracle(5, 3, (6, 0, 0)) == 5


@pytest.mark.parametrize("m", range(2, 8))
def test_ring_integrals_match_oracle(m):
    preset = grassmannian(m, 2)
    ring = preset.ring
    s1, s2 = ring.gens()
    top = ring.dimension
    for b in range(top // 2 + 1):
        a = top - 2 * b
        assert integrate(s1 ** a * s2 ** b) == schubert_integral_oracle(m, 2, (a, b))
