from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coind_lab.action import inversion_action, trivial_action, validate_group_action
from coind_lab.catalog import cyclic, get_group
from coind_lab.errors import ContinuityError, TopGroupValidationError, TopologyValidationError
from coind_lab.groups import Subgroup
from coind_lab.topology import (
    continuity_violation,
    continuous_maps_group,
    coset_topology,
    curry_check,
    discrete,
    generated_topology,
    group_topologies,
    indiscrete,
    is_finer,
    joint_continuity_violation,
    product_topology,
    validate_continuous_action,
    validate_topgroup,
    validate_topology,
)

SIERPINSKI = [[], [1], [0, 1]]


def test_validate_topology_minimal_neighbourhoods():
    tau = validate_topology(SIERPINSKI, 2)
    assert tau.neighbourhood(0) == (0, 1)
    assert tau.neighbourhood(1) == (1,)
    assert tau.is_open([1]) and not tau.is_open([0])
    assert tau.opens() == [0, 2, 3]


@pytest.mark.parametrize(
    "family,n,kind",
    [
        ([[0], [0, 1]], 2, "empty"),
        ([[], [0]], 2, "full"),
        ([[], [0], [1], [0, 1, 2]], 3, "union"),
        ([[], [0, 1], [1, 2], [0, 1, 2]], 3, "intersection"),
        ([[], [0, 5]], 2, "malformed"),
    ],
)
def test_validate_topology_failures(family, n, kind):
    with pytest.raises(TopologyValidationError) as exc:
        validate_topology(family, n)
    assert exc.value.kind == kind


def test_intersection_witness():
    with pytest.raises(TopologyValidationError) as exc:
        validate_topology([[], [0, 1], [1, 2], [0, 1, 2]], 3)
    assert exc.value.witness == ((0, 1), (1, 2))


def test_generated_and_product_topologies():
    tau = generated_topology(3, [[0]])
    assert tau.opens() == [0, 1, 7]
    both = product_topology(discrete(2), indiscrete(2))
    assert both.neighbourhood(0) == (0, 1)
    assert both.neighbourhood(2) == (2, 3)
    assert is_finer(discrete(3), indiscrete(3))
    assert not is_finer(indiscrete(3), discrete(3))


def test_continuity_violation():
    assert continuity_violation([0, 1], indiscrete(2), discrete(2)) == (0, 1)
    assert continuity_violation([0, 1], discrete(2), indiscrete(2)) is None


def test_sierpinski_is_not_a_group_topology():
    with pytest.raises(TopGroupValidationError) as exc:
        validate_topgroup(cyclic(2), validate_topology(SIERPINSKI, 2))
    assert exc.value.operation == "multiplication"


def test_inversion_checked_first():
    with pytest.raises(TopGroupValidationError) as exc:
        validate_topgroup(cyclic(3), validate_topology([[], [1], [0, 1, 2]], 3))
    assert exc.value.operation == "inversion"


def test_carrier_size_mismatch():
    with pytest.raises(TopGroupValidationError) as exc:
        validate_topgroup(cyclic(3), discrete(2))
    assert exc.value.operation == "carrier"


def test_coset_topology_and_core():
    Z4 = cyclic(4)
    top = validate_topgroup(Z4, coset_topology(Z4, Subgroup.from_members(Z4, [0, 2])))
    assert top.core.members == (0, 2)
    assert top.topology.neighbourhood(1) == (1, 3)


def test_group_topologies_one_per_normal_subgroup():
    assert len(group_topologies(cyclic(4))) == 3
    assert len(group_topologies(get_group("S3"))) == 3
    tops = group_topologies(get_group("V4"))
    assert len(tops) == 5
    assert any(t.is_discrete() for t in tops) and any(t.is_indiscrete() for t in tops)
    for tau in tops:
        validate_topgroup(get_group("V4"), tau)


def test_continuous_maps_group_on_discrete_spaces():
    Z2 = cyclic(2)
    d = validate_topgroup(Z2, discrete(2))
    top, maps = continuous_maps_group(d, d)
    assert top.order == 4
    assert top.topology.is_discrete()
    assert maps.domain_size == 2

    i = validate_topgroup(Z2, indiscrete(2))
    top, maps = continuous_maps_group(i, d)
    assert top.order == 2


@pytest.mark.parametrize(
    "B,X,Y",
    [
        (discrete(2), validate_topology(SIERPINSKI, 2), validate_topology(SIERPINSKI, 2)),
        (validate_topology(SIERPINSKI, 2), discrete(2), indiscrete(2)),
        (indiscrete(2), discrete(1), discrete(2)),
    ],
)
def test_curry_check_is_bijective(B, X, Y):
    report = curry_check(B, X, Y)
    assert report.bijective
    assert report.left_count == report.right_count


def test_joint_continuity():
    Z2, Z4 = cyclic(2), cyclic(4)
    Bi = validate_topgroup(Z2, indiscrete(2))
    Z4d = validate_topgroup(Z4, discrete(4))
    a = inversion_action(Z4)
    assert joint_continuity_violation(Bi, Z4d, a) == (0, 1)
    with pytest.raises(ContinuityError) as exc:
        validate_continuous_action(Bi, Z4d, a)
    assert exc.value.kind == "joint"
    assert exc.value.witness == (0, 1)
    loose = validate_continuous_action(Bi, Z4d, a, joint=False)
    assert not loose.jointly_continuous

    Bd = validate_topgroup(Z2, discrete(2))
    assert validate_continuous_action(Bd, Z4d, a).jointly_continuous


def test_discontinuous_automorphism():
    V4 = get_group("V4")
    swap = validate_group_action([[0, 1, 2, 3], [0, 2, 1, 3]], cyclic(2), V4)
    tau = coset_topology(V4, Subgroup.from_members(V4, [0, 1]))
    with pytest.raises(ContinuityError) as exc:
        validate_continuous_action(validate_topgroup(cyclic(2), discrete(2)), validate_topgroup(V4, tau), swap)
    assert exc.value.kind == "automorphism"


def test_parent_mismatch():
    Z2 = cyclic(2)
    with pytest.raises(ContinuityError) as exc:
        validate_continuous_action(
            validate_topgroup(Z2, discrete(2)),
            validate_topgroup(cyclic(3), discrete(3)),
            trivial_action(Z2, cyclic(4)),
        )
    assert exc.value.kind == "parent"


@settings(derandomize=True, max_examples=60, deadline=None)
@given(
    st.integers(min_value=1, max_value=4).flatmap(
        lambda n: st.tuples(st.just(n), st.lists(st.sets(st.integers(0, n - 1)), max_size=4))
    )
)
def test_generated_topology_is_closed(case):
    n, subbasis = case
    tau = generated_topology(n, [sorted(s) for s in subbasis])
    opens = set(tau.opens())
    assert 0 in opens and (1 << n) - 1 in opens
    for A in opens:
        for B in opens:
            assert A | B in opens and A & B in opens
    for s in subbasis:
        assert tau.is_open(s)
    again = validate_topology([[x for x in range(n) if (O >> x) & 1] for O in sorted(opens)], n)
    assert again == tau


@pytest.mark.parametrize("B_top", [discrete(2), indiscrete(2), discrete(3)])
def test_maps_into_indiscrete_group_form_indiscrete_space(B_top):
    B = validate_topgroup(cyclic(B_top.size), B_top)
    Y = validate_topgroup(cyclic(3), indiscrete(3))
    top, maps = continuous_maps_group(B, Y)
    assert top.order == 3 ** B_top.size
    assert top.topology.is_indiscrete()
