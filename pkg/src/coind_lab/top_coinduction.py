from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .action import GroupAction, validate_group_action
from .coinduction import EquivariantMapGroup, equivariant_maps
from .config import DEFAULT_BUDGET, Budget
from .errors import (
    ContinuityError,
    InternalConsistencyError,
    SubgroupError,
    TopGroupValidationError,
)
from .groups import Homomorphism, Subgroup
from .topology import (
    ContinuousAction,
    FiniteTopology,
    TopGroup,
    automorphism_continuity_violation,
    initial_topology,
    is_continuous,
    is_finer,
    pointwise_topology,
    subspace_topology,
    validate_continuous_action,
    validate_topgroup,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TopLevel:
    """One stage (G_l, τ_l): a subgroup of the original target, re-indexed as its own TopGroup."""

    subgroup: Subgroup
    group: TopGroup
    inclusion: Homomorphism
    action: GroupAction

    @property
    def topology(self) -> FiniteTopology:
        return self.group.topology


@dataclass(frozen=True)
class TopTower:
    levels: Tuple[TopLevel, ...]
    iterations: int
    limit: ContinuousAction

    @property
    def last(self) -> TopLevel:
        return self.levels[-1]


def _restricted_action(a: GroupAction, members: np.ndarray, H) -> GroupAction:
    lookup = np.full(a.target.order, -1, dtype=np.int64)
    lookup[members] = np.arange(len(members))
    return validate_group_action(lookup[a.table[:, members]], a.actor, H)


def t_top_step(B: TopGroup, G: TopGroup, a: GroupAction) -> TopLevel:
    """G_1 = {g : b ↦ b·g continuous}, topologised by pulling back the compact-open topology along g ↦ (b ↦ b·g).

    For finite B the compact-open neighbourhood of g ↦ (b ↦ b·g) is cut out by the sets
    {h : b·h ∈ U_(b·g)}, so τ_1 is the initial topology of the maps a(b, -).
    """
    hit = automorphism_continuity_violation(G, a)
    if hit is not None:
        raise ContinuityError(
            f"{a.actor.names[hit[0]]} acts discontinuously on {G.group.label}", kind="automorphism", witness=hit
        )
    columns = a.table.T  # columns[g, b] = b·g
    keep = [g for g in a.target.elements if is_continuous(columns[g], B.topology, G.topology)]
    try:
        G1 = Subgroup.from_members(a.target, keep)
    except SubgroupError as e:
        raise InternalConsistencyError(f"G_1 is not a subgroup: {e}") from e
    if not a.stabilizes(G1):
        raise InternalConsistencyError(f"G_1 = {G1.describe()} is not stable under {a.actor.label}")

    members = np.array(G1.members, dtype=np.int64)
    tau1 = initial_topology(len(members), [(a.table[b, members], G.topology) for b in a.actor.elements])
    if not is_finer(tau1, subspace_topology(G.topology, members)):
        raise InternalConsistencyError("τ_1 is coarser than the subspace topology")

    H, inclusion = G1.as_group(label=f"{a.target.label}|{G1.order}")
    try:
        top = validate_topgroup(H, tau1)
    except TopGroupValidationError as e:
        raise InternalConsistencyError(f"(G_1, τ_1) is not a topological group: {e}") from e
    action = _restricted_action(a, members, H)
    if automorphism_continuity_violation(top, action) is not None:
        raise InternalConsistencyError(f"{a.actor.label} does not act on (G_1, τ_1) by continuous automorphisms")
    return TopLevel(subgroup=G1, group=top, inclusion=inclusion, action=action)


def t_top_infinity(B: TopGroup, G: TopGroup, a: GroupAction, budget: Budget = DEFAULT_BUDGET) -> TopTower:
    """Iterate ``t_top_step`` until subgroup and topology both repeat."""
    identity = Homomorphism.identity(G.group)
    levels: List[TopLevel] = [TopLevel(subgroup=G.group.full, group=G, inclusion=identity, action=a)]
    iterations = 0
    while True:
        current = levels[-1]
        step = t_top_step(B, current.group, current.action)
        iterations += 1
        if step.subgroup == current.group.group.full and step.topology == current.topology:
            break
        budget.require("topological tower steps", len(levels), budget.max_tower_steps)
        inclusion = current.inclusion.compose(step.inclusion)
        levels.append(
            TopLevel(
                subgroup=inclusion.image(),
                group=step.group,
                inclusion=inclusion,
                action=step.action,
            )
        )

    last = levels[-1]
    # the limit topology is the coarsest making every G_∞ → (G_l, τ_l) continuous
    positions = []
    for level in levels:
        lookup = np.full(G.order, -1, dtype=np.int64)
        lookup[level.inclusion.table] = np.arange(level.group.order)
        positions.append((lookup[last.inclusion.table], level.topology))
    tau_inf = initial_topology(last.group.order, positions)
    if tau_inf != last.topology:
        raise InternalConsistencyError("projective limit topology differs from the last tower level")
    try:
        limit = validate_continuous_action(B, last.group, last.action, joint=True)
    except ContinuityError as e:
        raise InternalConsistencyError(f"limit action is not jointly continuous: {e}") from e
    logger.info(
        "topological tower on %s: %d levels, limit order %d", G.group.label, len(levels), last.group.order
    )
    return TopTower(levels=tuple(levels), iterations=iterations, limit=limit)


@dataclass(frozen=True)
class TopCoinduced:
    maps: EquivariantMapGroup
    carrier: TopGroup
    tower: TopTower

    @property
    def limit(self) -> ContinuousAction:
        return self.tower.limit

    def record(self) -> dict:
        return {
            "carrier_order": self.carrier.order,
            "tower_length": len(self.tower.levels),
            "iterations": self.tower.iterations,
            "limit_order": self.limit.target.order,
            "limit_discrete": self.limit.target.topology.is_discrete(),
        }


def topological_coinduce(
    alpha: Homomorphism,
    E: TopGroup,
    B: TopGroup,
    Y: TopGroup,
    e_action: GroupAction,
    budget: Budget = DEFAULT_BUDGET,
) -> TopCoinduced:
    """hom_E(B, Y) ⊆ Y^B with the product topology, B acting by precomposition, then the tower."""
    if alpha.source != E.group or alpha.target != B.group:
        raise ContinuityError("α does not go between the given topological groups", kind="parent")
    if not is_continuous(alpha.table, E.topology, B.topology):
        raise ContinuityError(f"{alpha!r} is not continuous", kind="alpha")
    validate_continuous_action(E, Y, e_action, joint=True)
    maps = equivariant_maps(alpha, e_action, budget)
    tau = pointwise_topology(Y.topology, maps.maps.maps)
    try:
        carrier = validate_topgroup(maps.carrier, tau)
    except TopGroupValidationError as e:
        raise InternalConsistencyError(f"pointwise topology on hom_E(B, Y) is not a group topology: {e}") from e
    tower = t_top_infinity(B, carrier, maps.b_action, budget)
    return TopCoinduced(maps=maps, carrier=carrier, tower=tower)
