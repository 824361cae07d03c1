# tests/test_residual.py
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
import pickle

import pytest

from src.core.bundles import Bundle, multi_segre, multi_segre_pushforward, segre_total, sym_power, trivial
from src.core.errors import (
    ConfigurationError,
    DimensionMismatch,
    RankCodimMismatch,
    RingMismatch,
)
from src.core.graded_ring import integrate, multinomial, ring_create
from src.core.varieties import grassmannian, projective_space
from src.services.residual import (
    Stratum,
    VanishingConfiguration,
    contribution,
    contribution_coefficients,
    format_coefficients,
    format_segre_monomial,
    lci_chern_number,
    residual_chern_number,
    residual_terms,
)


def stratum(m, j, d, multiplicity=1):
    grass = grassmannian(m, 2)
    return Stratum(
        labels=tuple(range(1, j + 1)),
        ring=grass.ring,
        restricted_bundle=sym_power(grass.Q, d),
        normals=((grass.Q, 2),) * j,
        multiplicity=multiplicity,
    )


def point_ring():
    return ring_create([], 0, (), {(): 1}, name="pt")


def test_contribution_of_one_normal_is_segre(g42):
    assert contribution([(g42.Q, 2)], 4) == segre_total(g42.Q)


def test_contribution_of_two_normals(normal_p2, p2):
    h = p2.h
    assert contribution([(normal_p2, 2), (normal_p2, 2)], 2) == 6 - 20 * h + 20 * h ** 2


def test_contribution_of_three_normals_on_a_point():
    ring = point_ring()
    normals = [(trivial(ring, 2), 2)] * 3
    assert contribution(normals, 0) == 90


def test_contribution_rank_must_match_codimension(normal_p2):
    with pytest.raises(RankCodimMismatch):
        contribution([(normal_p2, 3)], 2)


def test_contribution_is_symmetric_in_the_normals(p4):
    bundles = [p4.O(1), Bundle(2, (1 + p4.h) * (1 + 3 * p4.h)), p4.O(-2)]
    forward = contribution([(b, b.rank) for b in bundles], 4)
    backward = contribution([(b, b.rank) for b in reversed(bundles)], 4)
    assert forward == backward
    assert forward == multi_segre(bundles, 4) == multi_segre_pushforward(bundles, 4)


def test_lci_chern_numbers(g42):
    assert lci_chern_number(stratum(3, 1, 3)) == 15
    assert lci_chern_number(stratum(4, 1, 5)) == 1275
    ring = point_ring()
    point = Stratum(labels=(1,), ring=ring, restricted_bundle=trivial(ring, 2), normals=((trivial(ring, 2), 2),))
    assert lci_chern_number(point) == 1
    with pytest.raises(ConfigurationError):
        lci_chern_number(stratum(3, 2, 5))


@pytest.mark.parametrize(
    "m, j, d, expected",
    [
        (3, 1, 3, 15),
        (2, 2, 3, 6),
        (4, 1, 5, 1275),
        (3, 2, 5, 440),
        (2, 3, 5, 90),
    ],
)
def test_stratum_integrals(m, j, d, expected):
    (term,) = residual_terms(VanishingConfiguration(d + 1, (stratum(m, j, d),)))
    assert term.integral == expected


def test_single_stratum_matches_lci():
    single = stratum(4, 1, 5)
    config = VanishingConfiguration(6, (single,))
    assert residual_chern_number(config) == lci_chern_number(single)


def test_sign_law():
    assert stratum(4, 1, 5).sign == 1
    assert stratum(3, 2, 5).sign == -1
    assert stratum(2, 3, 5).sign == 1


def test_cubic_surface_configuration():
    config = VanishingConfiguration(
        4, (stratum(3, 1, 3, multiplicity=3), stratum(2, 2, 3, multiplicity=3))
    )
    terms = residual_terms(config)
    assert [(t.multiplicity, t.sign, t.integral) for t in terms] == [(3, 1, 15), (3, -1, 6)]
    assert residual_chern_number(config) == 27


def test_quintic_configuration_on_an_executor():
    config = VanishingConfiguration(
        6,
        (
            stratum(4, 1, 5, multiplicity=5),
            stratum(3, 2, 5, multiplicity=10),
            stratum(2, 3, 5, multiplicity=10),
        ),
    )
    with ThreadPoolExecutor(max_workers=3) as pool:
        terms = residual_terms(config, pool)
    assert [t.subtotal for t in terms] == [6375, -4400, 900]
    assert residual_chern_number(config) == 2875


def test_strata_are_picklable():
    original = stratum(3, 2, 5, multiplicity=10)
    copy = pickle.loads(pickle.dumps(original))
    assert copy.ring == original.ring
    assert copy.restricted_bundle == original.restricted_bundle
    assert residual_terms(VanishingConfiguration(6, (copy,)))[0].integral == 440


def test_stratum_validation(p2, normal_p2):
    with pytest.raises(ConfigurationError):
        Stratum(labels=(), ring=p2.ring, restricted_bundle=normal_p2, normals=())
    with pytest.raises(ConfigurationError):
        Stratum(labels=(1, 1), ring=p2.ring, restricted_bundle=normal_p2, normals=((normal_p2, 2),) * 2)
    with pytest.raises(RankCodimMismatch):
        Stratum(labels=(1, 2), ring=p2.ring, restricted_bundle=normal_p2, normals=((normal_p2, 2),))
    with pytest.raises(ConfigurationError):
        Stratum(labels=(1,), ring=p2.ring, restricted_bundle=normal_p2, normals=((normal_p2, 2),), multiplicity=0)
    with pytest.raises(RingMismatch):
        Stratum(labels=(1,), ring=projective_space(3).ring, restricted_bundle=normal_p2, normals=((normal_p2, 2),))


def test_configuration_validation():
    with pytest.raises(DimensionMismatch):
        VanishingConfiguration(5, (stratum(4, 1, 5),))
    with pytest.raises(ConfigurationError):
        VanishingConfiguration(6, (stratum(4, 1, 5), stratum(4, 1, 5)))


@pytest.mark.parametrize(
    "d, l, degree, expected",
    [
        (2, 1, 3, {(): 1, (1,): 1, (2,): 1, (3,): 1}),
        (2, 2, 2, {(): 6, (1,): 20, (1, 1): 20, (2,): 30}),
        (2, 3, 2, {(): 90, (1,): 630, (1, 1): 1680, (2,): 1260}),
        (3, 2, 2, {(): 20, (1,): 70, (1, 1): 70, (2,): 112}),
        (3, 3, 2, {(): 1680, (1,): 12600, (2,): 27720, (1, 1): 34650}),
    ],
)
def test_contribution_table_rows(d, l, degree, expected):
    table = contribution_coefficients(d, l, degree)
    assert {k: v for k, v in table.items() if sum(k) <= degree} == expected


def test_contribution_table_degree_three_entries():
    assert contribution_coefficients(2, 2, 3)[(3,)] == 42
    assert contribution_coefficients(2, 2, 3)[(2, 1)] == 70
    three = contribution_coefficients(2, 3, 3)
    assert (three[(3,)], three[(2, 1)], three[(1, 1, 1)]) == (2268, 7560, 1680)
    assert contribution_coefficients(3, 2, 3)[(3,)] == 168
    # the formula puts 252 on s1*s2, not s1*s3
    assert contribution_coefficients(3, 2, 3)[(2, 1)] == 252
    big = contribution_coefficients(3, 3, 3)
    assert (big[(3,)], big[(2, 1)], big[(1, 1, 1)]) == (55440, 166320, 34650)


@pytest.mark.parametrize("d", range(1, 5))
@pytest.mark.parametrize("l", range(1, 5))
def test_contribution_table_constant_term(d, l):
    assert contribution_coefficients(d, l, 0)[()] == multinomial(l * d, [d] * l)


def test_contribution_table_input_checks():
    with pytest.raises(ConfigurationError):
        contribution_coefficients(0, 1, 2)


def test_formatting_of_table():
    assert format_segre_monomial(()) == "1"
    assert format_segre_monomial((2, 1, 1)) == "s1^2*s2"
    assert format_coefficients(contribution_coefficients(2, 2, 1)) == "6 + 20*s1"


def test_point_integral_of_scalar():
    ring = point_ring()
    assert integrate(ring.scalar(Fraction(5))) == 5
