from __future__ import annotations

import numpy as np
import pytest

from coind_lab.action import inversion_action, trivial_action, validate_group_action
from coind_lab.catalog import cyclic, get_group
from coind_lab.errors import ContinuityError
from coind_lab.groups import Homomorphism, Subgroup, row_indices
from coind_lab.top_coinduction import t_top_infinity, t_top_step, topological_coinduce
from coind_lab.topology import (
    continuous_maps_space,
    coset_topology,
    discrete,
    indiscrete,
    subspace_topology,
    validate_topgroup,
)


@pytest.fixture
def Bi():
    return validate_topgroup(cyclic(2), indiscrete(2))


@pytest.fixture
def Bd():
    return validate_topgroup(cyclic(2), discrete(2))


@pytest.fixture
def Z4d():
    return validate_topgroup(cyclic(4), discrete(4))


def test_step_keeps_elements_with_continuous_orbit_map(Bi, Z4d):
    level = t_top_step(Bi, Z4d, inversion_action(cyclic(4)))
    assert level.subgroup.members == (0, 2)
    assert level.topology.is_discrete()
    assert level.action.is_trivial()


def test_tower_for_inversion_under_indiscrete_actor(Bi, Z4d):
    tower = t_top_infinity(Bi, Z4d, inversion_action(cyclic(4)))
    assert len(tower.levels) == 2
    assert tower.iterations == 2
    assert tower.limit.target.order == 2
    assert tower.limit.target.topology.is_discrete()
    assert tower.limit.jointly_continuous
    assert list(tower.last.inclusion.table) == [0, 2]


def test_tower_is_constant_for_jointly_continuous_input(Bd, Z4d):
    tower = t_top_infinity(Bd, Z4d, inversion_action(cyclic(4)))
    assert len(tower.levels) == 1
    assert tower.iterations == 1
    assert tower.limit.target.order == 4


def test_coarse_target_keeps_everything(Bi):
    Z4 = cyclic(4)
    Z4h = validate_topgroup(Z4, coset_topology(Z4, Subgroup.from_members(Z4, [0, 2])))
    tower = t_top_infinity(Bi, Z4h, inversion_action(Z4))
    # b ↦ b·g stays inside g + {0, 2}
    assert tower.limit.target.order == 4
    assert len(tower.levels) == 1


def test_discontinuous_automorphism_is_rejected(Bd):
    V4 = get_group("V4")
    swap = validate_group_action([[0, 1, 2, 3], [0, 2, 1, 3]], cyclic(2), V4)
    tau = coset_topology(V4, Subgroup.from_members(V4, [0, 1]))
    with pytest.raises(ContinuityError) as exc:
        t_top_infinity(Bd, validate_topgroup(V4, tau), swap)
    assert exc.value.kind == "automorphism"


def test_coinduce_from_trivial_group_keeps_constant_maps(Bi):
    E = validate_topgroup(get_group("1"), discrete(1))
    Y = validate_topgroup(cyclic(2), discrete(2))
    alpha = Homomorphism.trivial(E.group, Bi.group)
    out = topological_coinduce(alpha, E, Bi, Y, trivial_action(E.group, Y.group))
    record = out.record()
    assert record["carrier_order"] == 4
    assert record["limit_order"] == 2
    assert record["limit_discrete"] is True
    assert record["tower_length"] == 2


def test_coinduce_along_identity(Bd):
    Y = validate_topgroup(cyclic(2), discrete(2))
    alpha = Homomorphism.identity(cyclic(2))
    out = topological_coinduce(alpha, Bd, Bd, Y, trivial_action(cyclic(2), cyclic(2)))
    assert out.carrier.order == 2
    assert out.limit.target.order == 2
    assert len(out.tower.levels) == 1


def test_coinduce_needs_continuous_alpha(Bi, Bd):
    alpha = Homomorphism.identity(cyclic(2))
    Y = validate_topgroup(cyclic(2), discrete(2))
    with pytest.raises(ContinuityError) as exc:
        topological_coinduce(alpha, Bi, Bd, Y, trivial_action(cyclic(2), cyclic(2)))
    assert exc.value.kind == "alpha"


@pytest.mark.parametrize(
    "b_tau,g_members",
    [(discrete(2), [0, 2]), (indiscrete(2), [0, 2]), (discrete(2), [0]), (indiscrete(2), [0])],
)
def test_step_topology_matches_compact_open_subspace(b_tau, g_members):
    Z4 = cyclic(4)
    B = validate_topgroup(cyclic(2), b_tau)
    G = validate_topgroup(Z4, coset_topology(Z4, Subgroup.from_members(Z4, g_members)))
    a = inversion_action(Z4)
    level = t_top_step(B, G, a)

    rows, c_top = continuous_maps_space(B.topology, G.topology)
    orbit_maps = a.table.T[list(level.subgroup.members)]  # g ↦ (b ↦ b·g)
    idx = row_indices(rows, orbit_maps)
    assert np.all(idx >= 0)
    assert subspace_topology(c_top, idx) == level.topology
