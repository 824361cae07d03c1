# src/core/schubert.py
"""Schubert calculus on Grass(m, k) by the Pieri rule.

Partitions fit in the k x (m - k) box: at most k rows, parts at most m - k.
The special class sigma_i = c_i(Q) acts by adding a vertical strip of i boxes,
one box to each of i distinct rows. This module works purely on partitions and
never touches the graded-ring rewrite machinery, so it can serve as an
independent check of ring reduction.
"""
from collections import Counter
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, Sequence, Tuple

from src.core.errors import DegreeMismatch

Partition = Tuple[int, ...]


def box(m: int, k: int) -> Partition:
    return (m - k,) * k


def vertical_strips(partition: Partition, size: int, width: int) -> Iterator[Partition]:
    """Partitions obtained by adding one box to each of ``size`` distinct rows."""
    for rows in combinations(range(len(partition)), size):
        grown = list(partition)
        for row in rows:
            grown[row] += 1
        if grown[0] > width:
            continue
        if all(grown[i] >= grown[i + 1] for i in range(len(grown) - 1)):
            yield tuple(grown)


def pieri_product(
    classes: Dict[Partition, int], i: int, m: int, k: int
) -> Dict[Partition, int]:
    """Multiply a Schubert-basis combination by sigma_i."""
    result: Counter = Counter()
    for partition, coefficient in classes.items():
        for grown in vertical_strips(partition, i, m - k):
            result[grown] += coefficient
    return {p: c for p, c in result.items() if c}


def schubert_expansion(m: int, k: int, exponents: Sequence[int]) -> Dict[Partition, int]:
    """Expand sigma_1^e1 * ... * sigma_k^ek in the Schubert basis."""
    classes: Dict[Partition, int] = {(0,) * k: 1}
    for i, e in enumerate(exponents, start=1):
        for _ in range(e):
            classes = pieri_product(classes, i, m, k)
    return classes


def schubert_integral_oracle(m: int, k: int, exponents: Sequence[int]) -> Fraction:
    if len(exponents) != k:
        raise DegreeMismatch(f"expected {k} exponents for Grass({m},{k}), got {len(exponents)}")
    weight = sum(i * e for i, e in enumerate(exponents, start=1))
    if weight != k * (m - k):
        raise DegreeMismatch(
            f"monomial has degree {weight}, Grass({m},{k}) has dimension {k * (m - k)}"
        )
    if k == 0:
        return Fraction(1)
    return Fraction(schubert_expansion(m, k, exponents).get(box(m, k), 0))
