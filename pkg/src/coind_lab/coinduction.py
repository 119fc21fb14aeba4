from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .action import (
    EquivariantMorphism,
    GroupAction,
    SCFAction,
    enumerate_equivariant_morphisms,
    preservation_violation,
    preserves_filtrations,
    restrict_group_action,
    restrict_to_stable_subgroup,
    scf_action_violation,
    validate_group_action,
)
from .config import DEFAULT_BUDGET, Budget
from .errors import (
    ActionValidationError,
    HomomorphismError,
    InternalConsistencyError,
    SubgroupError,
)
from .filtration import (
    Filtration,
    constant_filtration,
    filtration_contains,
    image_filtration,
    pointwise_filtration,
    scf_violation,
    validate_scf,
)
from .groups import FiniteGroup, FunctionGroup, Homomorphism, Subgroup, pointwise_group

logger = logging.getLogger(__name__)


# -----------------------------
# Equivariant maps
# -----------------------------


@dataclass(frozen=True)
class EquivariantMapGroup:
    """hom_E(B, Y): maps u with u(α(e)b) = e·u(b), pointwise product, (b·u)(c) = u(cb)."""

    alpha: Homomorphism
    e_action: GroupAction
    maps: FunctionGroup
    b_action: GroupAction
    route: str

    @property
    def carrier(self) -> FiniteGroup:
        return self.maps.group

    @property
    def Y(self) -> FiniteGroup:
        return self.e_action.target


def transversal_count(alpha: Homomorphism, e_action: GroupAction) -> int:
    """|Fix_Y(ker α)| ** [B : α(E)], the number of equivariant maps."""
    kernel = list(alpha.kernel().members)
    fixed = np.all(e_action.table[kernel] == np.arange(e_action.target.order)[None, :], axis=0)
    index = alpha.target.order // alpha.image().order
    return int(np.count_nonzero(fixed)) ** index


def _maps_by_filter(alpha: Homomorphism, e_action: GroupAction) -> np.ndarray:
    B, Y = alpha.target, e_action.target
    candidates = np.array(list(itertools.product(range(Y.order), repeat=B.order)), dtype=np.int64)
    keep = np.ones(len(candidates), dtype=bool)
    for e in e_action.actor.elements:
        shifted = candidates[:, B.mul[alpha(e)]]  # u(α(e)b)
        keep &= np.all(shifted == e_action.table[e][candidates], axis=1)
    return candidates[keep]


def _maps_by_transversal(alpha: Homomorphism, e_action: GroupAction) -> np.ndarray:
    B, Y = alpha.target, e_action.target
    A = alpha.image()
    kernel = list(alpha.kernel().members)
    fixed = np.nonzero(np.all(e_action.table[kernel] == np.arange(Y.order)[None, :], axis=0))[0]

    lift: Dict[int, int] = {}
    for e in e_action.actor.elements:
        lift.setdefault(alpha(e), e)

    coset = np.full(B.order, -1, dtype=np.int64)
    pre = np.zeros(B.order, dtype=np.int64)
    reps: List[int] = []
    for b in B.elements:
        if coset[b] >= 0:
            continue
        for a in A.members:
            x = B.op(a, b)
            coset[x] = len(reps)
            pre[x] = lift[a]
        reps.append(b)

    choices = np.array(list(itertools.product(fixed, repeat=len(reps))), dtype=np.int64).reshape(-1, len(reps))
    # u(a·t) = e_a · u(t)
    return e_action.table[pre[None, :], choices[:, coset]]


def equivariant_maps(alpha: Homomorphism, e_action: GroupAction, budget: Budget = DEFAULT_BUDGET) -> EquivariantMapGroup:
    if e_action.actor != alpha.source:
        raise ActionValidationError(
            f"{e_action.actor.label} acts on {e_action.target.label}, but α starts at {alpha.source.label}", kind="actor"
        )
    B, Y = alpha.target, e_action.target
    expected = transversal_count(alpha, e_action)
    budget.require("equivariant map group order", expected, budget.max_carrier_order)

    if Y.order ** B.order <= budget.max_set_maps:
        rows, route = _maps_by_filter(alpha, e_action), "filter"
    else:
        rows, route = _maps_by_transversal(alpha, e_action), "transversal"
    if len(rows) != expected:
        raise InternalConsistencyError(f"{route} route found {len(rows)} equivariant maps, expected {expected}")

    maps = pointwise_group(Y, rows, label=f"hom_{alpha.source.label}({B.label},{Y.label})")
    k = maps.group.order
    shifted = np.stack([maps.maps[:, B.mul[:, b]] for b in B.elements])  # (b·u)(c) = u(cb)
    table = maps.lookup(shifted.reshape(B.order * k, B.order)).reshape(B.order, k)
    if np.any(table < 0):
        raise InternalConsistencyError("translated map left the equivariant carrier")
    b_action = validate_group_action(table, B, maps.group)
    logger.info("hom_%s(%s, %s): %d maps via %s", alpha.source.label, B.label, Y.label, k, route)
    return EquivariantMapGroup(alpha=alpha, e_action=e_action, maps=maps, b_action=b_action, route=route)


# -----------------------------
# Transport
# -----------------------------


@dataclass(frozen=True)
class TransportTower:
    levels: Tuple[Filtration, ...]
    iterations: int
    action: SCFAction

    @property
    def limit(self) -> Filtration:
        return self.levels[-1]


def _check_transport_input(B_f: Filtration, G_f: Filtration, a: GroupAction) -> None:
    if B_f.parent != a.actor or G_f.parent != a.target:
        raise ActionValidationError("filtrations do not live on the action's groups", kind="parent")
    validate_scf(B_f)
    pres = preservation_violation(a, G_f, actors=B_f.top)
    if pres is not None:
        raise pres


def t_step(B_f: Filtration, G_f: Filtration, a: GroupAction) -> Filtration:
    """t_i = {g ∈ G_i : [B_j, g] ⊆ G_{i+j} for all j}.

    j runs up to max(N_B, N_G): beyond it B_j and G_{i+j} no longer change.
    """
    _check_transport_input(B_f, G_f, a)
    G = a.target
    Br = a.bracket_table
    J = max(B_f.length, G_f.length)
    levels = []
    for i in range(1, G_f.length + 1):
        keep = G_f.level(i).indicator.copy()
        for j in range(1, J + 1):
            brackets = Br[list(B_f.level(j).members), :]
            keep &= np.all(G_f.level(i + j).indicator[brackets], axis=0)
        try:
            levels.append(Subgroup.from_members(G, np.nonzero(keep)[0].tolist()))
        except SubgroupError as e:
            raise InternalConsistencyError(f"t_{i} is not a subgroup: {e}") from e
    out = Filtration(G, tuple(levels))

    violation = scf_violation(out)
    if violation is not None:
        raise InternalConsistencyError(f"transported filtration is not strongly central: {violation}")
    pres = preservation_violation(a, out, actors=B_f.top)
    if pres is not None:
        raise InternalConsistencyError(f"transported filtration is not stable: {pres}")
    if not filtration_contains(G_f, out):
        raise InternalConsistencyError("transported filtration escapes its input")
    return out


def t_infinity(B_f: Filtration, G_f: Filtration, a: GroupAction, budget: Budget = DEFAULT_BUDGET) -> TransportTower:
    """Iterate ``t_step`` until a level repeats; the last level carries a certified action."""
    validate_scf(G_f)
    levels = [G_f]
    iterations = 0
    while True:
        nxt = t_step(B_f, levels[-1], a)
        iterations += 1
        if nxt == levels[-1]:
            break
        budget.require("transport tower steps", len(levels), budget.max_tower_steps)
        levels.append(nxt)
    limit = levels[-1]
    violation = scf_action_violation(a, B_f, limit)
    if violation is not None:
        raise InternalConsistencyError(f"fixed point of the transport does not carry the action: {violation}")
    action = SCFAction(base=a, actor_f=B_f, target_f=limit, certified=True)
    logger.info("t-infinity on %s: %d levels, limit orders %s", a.target.label, len(levels), list(limit.orders))
    return TransportTower(levels=tuple(levels), iterations=iterations, action=action)


# -----------------------------
# Co-induction
# -----------------------------


@dataclass(frozen=True)
class CoinducedPoint:
    """α_!(Y_*): the limit of the transport on hom_E(B, Y) with its pointwise filtration.

    ``point`` acts on the limit's first level, re-indexed as its own group; ``inclusion`` maps it
    into ``maps.carrier``.
    """

    alpha: Homomorphism
    source: SCFAction
    maps: EquivariantMapGroup
    pointwise: Filtration
    tower: TransportTower
    point: SCFAction
    inclusion: Homomorphism
    _to_local: np.ndarray = field(repr=False, compare=False)

    @property
    def group(self) -> FiniteGroup:
        return self.point.target

    def evaluate(self, x: int, b: int) -> int:
        """Value at b of the map behind element x of ``group``."""
        return self.maps.maps.value(self.inclusion(x), b)

    def local_index(self, carrier_index: np.ndarray) -> np.ndarray:
        return self._to_local[carrier_index]

    def record(self) -> dict:
        return {
            "carrier_order": self.maps.carrier.order,
            "route": self.maps.route,
            "pointwise_orders": list(self.pointwise.orders),
            "tower_length": len(self.tower.levels),
            "iterations": self.tower.iterations,
            "limit_orders": list(self.tower.limit.orders),
            "certified": self.point.certified,
        }


def coinduce(alpha: Homomorphism, B_f: Filtration, Y_point: SCFAction, budget: Budget = DEFAULT_BUDGET) -> CoinducedPoint:
    """Co-induce a certified E_*-point along α: E_* → B_* into a certified B_*-point."""
    if not Y_point.certified:
        raise ActionValidationError(f"co-induction needs a certified point, got {Y_point!r}", kind="uncertified")
    if B_f.parent != alpha.target:
        raise ActionValidationError(f"filtration lives on {B_f.parent.label}, not {alpha.target.label}", kind="parent")
    hit = preserves_filtrations(alpha, Y_point.actor_f, B_f)
    if hit is not None:
        i, e = hit
        raise ActionValidationError(
            f"{alpha.source.names[e]} ∈ E_{i} maps outside B_{i}", kind="filtration", witness=(i, e)
        )
    maps = equivariant_maps(alpha, Y_point.base, budget)
    pointwise = pointwise_filtration(maps.maps, Y_point.target_f)
    tower = t_infinity(B_f, pointwise, maps.b_action, budget)
    point, inclusion = restrict_to_stable_subgroup(maps.b_action, B_f, tower.limit)
    to_local = np.full(maps.carrier.order, -1, dtype=np.int64)
    to_local[inclusion.table] = np.arange(inclusion.source.order)
    to_local.setflags(write=False)
    return CoinducedPoint(
        alpha=alpha,
        source=Y_point,
        maps=maps,
        pointwise=pointwise,
        tower=tower,
        point=point,
        inclusion=inclusion,
        _to_local=to_local,
    )


def coinduce_group(alpha: Homomorphism, e_action: GroupAction, budget: Budget = DEFAULT_BUDGET) -> CoinducedPoint:
    """Plain co-induction: every filtration constant, so the transport keeps the whole carrier."""
    E, Y = alpha.source, e_action.target
    Y_point = SCFAction(
        base=e_action, actor_f=constant_filtration(E.full), target_f=constant_filtration(Y.full), certified=True
    )
    out = coinduce(alpha, constant_filtration(alpha.target.full), Y_point, budget)
    if out.group.order != out.maps.carrier.order:
        raise InternalConsistencyError("constant filtrations lost part of the equivariant carrier")
    return out


# -----------------------------
# Adjunction
# -----------------------------


def _as_internal(what: str, build):
    try:
        return build()
    except (HomomorphismError, ActionValidationError) as e:
        raise InternalConsistencyError(f"{what}: {e}") from e


def pulled_back(coinduced: CoinducedPoint, X: SCFAction) -> SCFAction:
    """α*(X_*): X with E acting through α, filtration of X unchanged."""
    return SCFAction(
        base=restrict_group_action(coinduced.alpha, X.base),
        actor_f=coinduced.source.actor_f,
        target_f=X.target_f,
        certified=X.certified,
    )


def transpose_forward(f: EquivariantMorphism, X: SCFAction, coinduced: CoinducedPoint) -> EquivariantMorphism:
    """f̂(x) = (b ↦ f(b·x)), landing in the co-induced point."""
    Y = coinduced.source
    if f.target_action != Y.base or f.source_action != restrict_group_action(coinduced.alpha, X.base):
        raise ActionValidationError("morphism does not go from α*(X) to the co-induced object", kind="source")
    if not filtration_contains(Y.target_f, image_filtration(f.underlying, X.target_f)):
        raise ActionValidationError("morphism does not preserve filtrations", kind="filtration")

    rows = f.underlying.table[X.base.table.T]  # rows[x, b] = f(b·x)
    carrier_idx = coinduced.maps.maps.lookup(rows)
    if np.any(carrier_idx < 0):
        x = int(np.nonzero(carrier_idx < 0)[0][0])
        raise InternalConsistencyError(f"transpose of {f.key} at {X.target.names[x]} is not equivariant")
    local = coinduced.local_index(carrier_idx)
    if np.any(local < 0):
        x = int(np.nonzero(local < 0)[0][0])
        raise InternalConsistencyError(f"transpose of {f.key} at {X.target.names[x]} misses the transport limit")

    hom = _as_internal("forward transpose", lambda: Homomorphism(X.target, coinduced.group, local))
    out = _as_internal("forward transpose", lambda: EquivariantMorphism(hom, X.base, coinduced.point.base))
    if not filtration_contains(coinduced.point.target_f, image_filtration(hom, X.target_f)):
        raise InternalConsistencyError(f"transpose of {f.key} does not preserve filtrations")
    return out


def transpose_backward(g: EquivariantMorphism, X: SCFAction, coinduced: CoinducedPoint) -> EquivariantMorphism:
    """ǧ(x) = g(x)(1)."""
    if g.source_action != X.base or g.target_action != coinduced.point.base:
        raise ActionValidationError("morphism does not go from X to the co-induced point", kind="source")
    B = coinduced.alpha.target
    table = coinduced.maps.maps.maps[coinduced.inclusion.table[g.underlying.table], B.identity]
    Y = coinduced.source
    hom = _as_internal("backward transpose", lambda: Homomorphism(X.target, Y.target, table))
    out = _as_internal(
        "backward transpose",
        lambda: EquivariantMorphism(hom, restrict_group_action(coinduced.alpha, X.base), Y.base),
    )
    if not filtration_contains(Y.target_f, image_filtration(hom, X.target_f)):
        raise InternalConsistencyError(f"backward transpose of {g.key} does not preserve filtrations")
    return out


def counit(coinduced: CoinducedPoint) -> EquivariantMorphism:
    """α*(α_!Y) → Y, u ↦ u(1)."""
    B = coinduced.alpha.target
    table = coinduced.maps.maps.maps[coinduced.inclusion.table, B.identity]
    hom = _as_internal("counit", lambda: Homomorphism(coinduced.group, coinduced.source.target, table))
    return _as_internal(
        "counit",
        lambda: EquivariantMorphism(
            hom, restrict_group_action(coinduced.alpha, coinduced.point.base), coinduced.source.base
        ),
    )


def evaluation_isomorphism(coinduced: CoinducedPoint) -> EquivariantMorphism:
    """For α = id, u ↦ u(1) is a filtered isomorphism of B_*-points onto Y_*."""
    alpha = coinduced.alpha
    if alpha.source != alpha.target or not np.array_equal(alpha.table, np.arange(alpha.source.order)):
        raise ActionValidationError("evaluation is an isomorphism only along the identity", kind="alpha")
    ev = counit(coinduced)
    if not (ev.underlying.is_injective() and ev.underlying.is_surjective()):
        raise InternalConsistencyError("evaluation at 1 is not bijective")
    if image_filtration(ev.underlying, coinduced.point.target_f) != coinduced.source.target_f:
        raise InternalConsistencyError("evaluation at 1 does not match filtrations level by level")
    return ev


def hom_sets(
    X: SCFAction, coinduced: CoinducedPoint, budget: Budget = DEFAULT_BUDGET
) -> Tuple[List[EquivariantMorphism], List[EquivariantMorphism]]:
    """(Hom(α*X_*, Y_*), Hom(X_*, α_!Y_*)), both in canonical order."""
    Y = coinduced.source
    left = enumerate_equivariant_morphisms(
        restrict_group_action(coinduced.alpha, X.base), Y.base, X.target_f, Y.target_f, budget
    )
    right = enumerate_equivariant_morphisms(
        X.base, coinduced.point.base, X.target_f, coinduced.point.target_f, budget
    )
    return left, right
