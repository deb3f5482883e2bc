"""Shared fixtures and independent reference implementations.

The naive_* helpers transcribe the defining sums directly (explicit loops
through the compose/invert tables) so the vectorized implementations are
checked against an independent evaluation path.
"""

from __future__ import annotations

import numpy as np
import pytest

from groupoid_workbench.algebra import GroupoidFunction
from groupoid_workbench.groupoid import FiniteGroupoid, HaarSystem, counting_haar, haar_from_weights, pair_groupoid
from groupoid_workbench.groups import cyclic_group
from groupoid_workbench.grading import Cocycle, GradedGroupoid, cocycle_from_map
from groupoid_workbench.groups import FreeAbelianGroup


def naive_convolve(a: GroupoidFunction, b: GroupoidFunction, haar: HaarSystem) -> dict[str, complex]:
    """(a*b)(x) = sum over {y : r(y) = r(x)} a(y) b(y^{-1}x) w(y), by direct loops."""
    g = a.groupoid
    out = {}
    for x in g.arrows:
        total = 0j
        for y_id in g.arrows_with_dst(x.dst):
            t = g.compose_ids(g.invert_id(y_id), x.id)
            assert t is not None
            total += a.value(y_id) * b.value(t) * haar.weight(g, y_id)
        out[x.id] = total
    return out


def naive_i_norm(a: GroupoidFunction, haar: HaarSystem) -> float:
    g = a.groupoid
    best = 0.0
    for u in g.units:
        direct = sum(abs(a.value(x)) * haar.weight(g, x) for x in g.arrows_with_dst(u))
        inverted = sum(abs(a.value(g.invert_id(x))) * haar.weight(g, x) for x in g.arrows_with_dst(u))
        best = max(best, direct, inverted)
    return best


def as_map(f: GroupoidFunction) -> dict[str, complex]:
    return {a.id: complex(v) for a, v in zip(f.groupoid.arrows, f.coeffs)}


def max_diff(f: GroupoidFunction, expected: dict[str, complex]) -> float:
    actual = as_map(f)
    keys = set(actual) | set(expected)
    return max(abs(actual.get(k, 0j) - expected.get(k, 0j)) for k in keys)


def pair_cocycle(g: FiniteGroupoid) -> Cocycle:
    """The integer grading c((i,j)) = i - j on a pair groupoid."""
    z = FreeAbelianGroup(1)
    label = {}
    for a in g.arrows:
        i, j = a.id.strip("()").split(",")
        label[a.id] = (int(i) - int(j),)
    return cocycle_from_map(g, z, label)


@pytest.fixture
def p2() -> FiniteGroupoid:
    return pair_groupoid(2)


@pytest.fixture
def p2_counting(p2) -> HaarSystem:
    return counting_haar(p2)


@pytest.fixture
def p2_weighted(p2) -> HaarSystem:
    return haar_from_weights(p2, {"1": 1.0, "2": 4.0})


@pytest.fixture
def p2_graded(p2, p2_counting) -> GradedGroupoid:
    return GradedGroupoid.build(p2, p2_counting, pair_cocycle(p2))


@pytest.fixture
def p2_graded_weighted(p2, p2_weighted) -> GradedGroupoid:
    return GradedGroupoid.build(p2, p2_weighted, pair_cocycle(p2))


@pytest.fixture
def z2_groupoid():
    from groupoid_workbench.groupoid import group_groupoid

    return group_groupoid(cyclic_group(2))


@pytest.fixture
def z3_groupoid():
    from groupoid_workbench.groupoid import group_groupoid

    return group_groupoid(cyclic_group(3))


def rng_functions(g: FiniteGroupoid, seed: int, count: int):
    from groupoid_workbench.algebra import random_function

    rng = np.random.default_rng(seed)
    return [random_function(g, rng) for _ in range(count)]
