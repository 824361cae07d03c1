# tests/conftest.py
import random

import pytest

from src.core.bundles import Bundle
from src.core.varieties import grassmannian, projective_space


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def p2():
    return projective_space(2)


@pytest.fixture
def p4():
    return projective_space(4)


@pytest.fixture
def g42():
    return grassmannian(4, 2)


@pytest.fixture
def g52():
    return grassmannian(5, 2)


@pytest.fixture
def normal_p2(p2):
    """Rank-2 bundle on P2 with c = 1 + h + h^2, so s1 = -h and s2 = 0."""
    h = p2.h
    return Bundle(2, 1 + h + h ** 2, name="N")


@pytest.fixture
def make_class():
    return random_class


def random_class(ring, rng, max_coefficient=3, unit=False):
    """Random combination of basis monomials; ``unit`` forces constant term 1."""
    terms = {}
    for degree in range(ring.dimension + 1):
        for m in ring.basis(degree):
            terms[m] = rng.randint(-max_coefficient, max_coefficient)
    if unit:
        terms[(0,) * len(ring.generators)] = 1
    return ring.element(terms)
