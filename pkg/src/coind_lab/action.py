from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .catalog import cyclic
from .config import DEFAULT_BUDGET, Budget
from .errors import (
    ActionValidationError,
    FiltrationError,
    HomomorphismError,
    InternalConsistencyError,
    ScfActionViolation,
)
from .filtration import (
    Filtration,
    filtration_contains,
    image_filtration,
    restrict_to_subgroup,
    scf_violation,
    validate_scf,
)
from .groups import FiniteGroup, Homomorphism, Subgroup, enumerate_homomorphisms, mask_of, validate_group

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GroupAction:
    """B acting on G by automorphisms; ``table[b, g]`` is b·g. Build with ``validate_group_action``."""

    actor: FiniteGroup
    target: FiniteGroup
    table: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupAction):
            return NotImplemented
        return self.actor == other.actor and self.target == other.target and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.actor, self.target, self.table.tobytes()))

    def __repr__(self) -> str:
        return f"GroupAction({self.actor.label} on {self.target.label})"

    def act(self, b: int, g: int) -> int:
        return int(self.table[b, g])

    def bracket(self, b: int, g: int) -> int:
        """[b, g] = (b·g) g⁻¹."""
        return int(self.bracket_table[b, g])

    @cached_property
    def bracket_table(self) -> np.ndarray:
        G = self.target
        out = G.mul[self.table, G.inv[None, :]]
        out.setflags(write=False)
        return out

    def automorphism(self, b: int) -> Homomorphism:
        return Homomorphism(self.target, self.target, self.table[b])

    def is_trivial(self) -> bool:
        return bool(np.all(self.table == np.arange(self.target.order)[None, :]))

    def stabilizes(self, H: Subgroup) -> bool:
        return bool(np.all(H.indicator[self.table[:, list(H.members)]]))


def validate_group_action(table: Sequence[Sequence[int]], B: FiniteGroup, G: FiniteGroup) -> GroupAction:
    """Certify a table as an action by automorphisms.

    Checks run in the order: table shape, unit law, automorphy of each row, composition law.
    """
    arr = np.asarray(table)
    if arr.shape != (B.order, G.order) or arr.dtype.kind not in "iu":
        raise ActionValidationError(
            f"action table must be {B.order}x{G.order} integer indices, got shape {arr.shape}", kind="malformed"
        )
    bad = np.argwhere((arr < 0) | (arr >= G.order))
    if bad.size:
        b, g = (int(v) for v in bad[0])
        raise ActionValidationError(f"entry ({b}, {g}) out of range", kind="malformed", witness=(b, g))
    arr = arr.astype(np.int64)

    arange = np.arange(G.order)
    moved = np.nonzero(arr[B.identity] != arange)[0]
    if moved.size:
        g = int(moved[0])
        raise ActionValidationError(
            f"unit of {B.label} moves {G.names[g]}", kind="unit", witness=(B.identity, g)
        )

    for b in B.elements:
        row = arr[b]
        if len(np.unique(row)) != G.order:
            raise ActionValidationError(f"{B.names[b]} does not act bijectively", kind="automorphism", witness=(b,))
        diff = np.argwhere(row[G.mul] != G.mul[row[:, None], row[None, :]])
        if diff.size:
            x, y = (int(v) for v in diff[0])
            raise ActionValidationError(
                f"{B.names[b]} does not respect the product of {G.names[x]} and {G.names[y]}",
                kind="automorphism",
                witness=(b, x, y),
            )

    lhs = arr[B.mul]  # (bb')·g
    rhs = arr[np.arange(B.order)[:, None, None], arr[None, :, :]]  # b·(b'·g)
    diff = np.argwhere(lhs != rhs)
    if diff.size:
        b, b2, g = (int(v) for v in diff[0])
        raise ActionValidationError(
            f"composition law fails at ({B.names[b]}, {B.names[b2]}, {G.names[g]})",
            kind="composition",
            witness=(b, b2, g),
        )
    arr.setflags(write=False)
    return GroupAction(actor=B, target=G, table=arr)


def trivial_action(B: FiniteGroup, G: FiniteGroup) -> GroupAction:
    return validate_group_action(np.tile(np.arange(G.order), (B.order, 1)), B, G)


def conjugation_action(G: FiniteGroup) -> GroupAction:
    return validate_group_action(G.conjugation_table, G, G)


def action_via_homomorphism(phi: Homomorphism) -> GroupAction:
    """b·g = φ(b) g φ(b)⁻¹."""
    G = phi.target
    return validate_group_action(G.conjugation_table[phi.table], phi.source, G)


def inversion_action(G: FiniteGroup) -> GroupAction:
    if not G.is_abelian:
        raise ActionValidationError(f"inversion is an automorphism only of abelian groups, not {G.label}", kind="automorphism")
    return validate_group_action([np.arange(G.order), G.inv], cyclic(2), G)


def action_from_automorphisms(B: FiniteGroup, autos: Sequence[Homomorphism]) -> GroupAction:
    if len(autos) != B.order:
        raise ActionValidationError(f"need one automorphism per element of {B.label}", kind="malformed")
    G = autos[0].target
    for f in autos:
        if f.source != G or f.target != G:
            raise HomomorphismError(f"{f!r} is not an endomorphism of {G.label}", kind="endomorphism")
    return validate_group_action([f.table for f in autos], B, G)


def restrict_group_action(alpha: Homomorphism, a: GroupAction) -> GroupAction:
    """e·g := α(e)·g."""
    if alpha.target != a.actor:
        raise ActionValidationError(f"{alpha!r} does not land in the actor {a.actor.label}", kind="actor")
    table = a.table[alpha.table]
    table.setflags(write=False)
    return GroupAction(actor=alpha.source, target=a.target, table=table)


# -----------------------------
# Filtered actions
# -----------------------------


@dataclass(frozen=True)
class SCFAction:
    """An action with filtrations on both sides; ``certified`` means [B_i, G_j] ⊆ G_{i+j} was checked."""

    base: GroupAction
    actor_f: Filtration
    target_f: Filtration
    certified: bool = False

    @property
    def actor(self) -> FiniteGroup:
        return self.base.actor

    @property
    def target(self) -> FiniteGroup:
        return self.base.target

    def __repr__(self) -> str:
        flag = "certified" if self.certified else "uncertified"
        return f"SCFAction({self.actor.label} {list(self.actor_f.orders)} on {self.target.label} {list(self.target_f.orders)}, {flag})"


def _check_parents(a: GroupAction, B_f: Filtration, G_f: Filtration) -> None:
    if B_f.parent != a.actor:
        raise FiltrationError(f"actor filtration lives on {B_f.parent.label}, not {a.actor.label}", kind="parent")
    if G_f.parent != a.target:
        raise FiltrationError(f"target filtration lives on {G_f.parent.label}, not {a.target.label}", kind="parent")


def preservation_violation(a: GroupAction, G_f: Filtration, actors: Optional[Subgroup] = None) -> Optional[ScfActionViolation]:
    """First level G_j moved out of itself by some actor element (all of B unless ``actors`` given)."""
    bs = list(actors.members) if actors is not None else list(a.actor.elements)
    for j, H in enumerate(G_f.levels, start=1):
        moved = a.table[np.ix_(bs, list(H.members))]
        bad = np.argwhere(~H.indicator[moved])
        if bad.size:
            b, g = bs[int(bad[0][0])], H.members[int(bad[0][1])]
            return ScfActionViolation(
                f"{a.actor.names[b]} moves {a.target.names[g]} out of level {j}",
                kind="preservation",
                i=j,
                j=None,
                witness=(b, g),
            )
    return None


def scf_action_violation(a: GroupAction, B_f: Filtration, G_f: Filtration) -> Optional[ScfActionViolation]:
    _check_parents(a, B_f, G_f)
    # only B_1 has to keep the levels: b outside B_1 never enters a bracket, and B_1 may be proper
    pres = preservation_violation(a, G_f, actors=B_f.top)
    if pres is not None:
        return pres
    Br = a.bracket_table
    # past these bounds both B_i and G_{i+j} (resp. G_j) are constant
    for i in range(1, max(B_f.length, G_f.length) + 1):
        Bi = list(B_f.level(i).members)
        for j in range(1, G_f.length + 1):
            Gj = G_f.level(j)
            target = G_f.level(i + j)
            bad = np.argwhere(~target.indicator[Br[np.ix_(Bi, list(Gj.members))]])
            if bad.size:
                b, g = Bi[int(bad[0][0])], Gj.members[int(bad[0][1])]
                return ScfActionViolation(
                    f"[B_{i}, G_{j}] ⊄ G_{i + j}: [{a.actor.names[b]}, {a.target.names[g]}] = "
                    f"{a.target.names[a.bracket(b, g)]}",
                    kind="bracket",
                    i=i,
                    j=j,
                    witness=(b, g),
                )
    return None


def validate_scf_action(a: GroupAction, B_f: Filtration, G_f: Filtration) -> SCFAction:
    """Certify a filtered action; the least violating (i, j) is raised as ``ScfActionViolation``."""
    _check_parents(a, B_f, G_f)
    validate_scf(B_f)
    validate_scf(G_f)
    violation = scf_action_violation(a, B_f, G_f)
    if violation is not None:
        raise violation
    return SCFAction(base=a, actor_f=B_f, target_f=G_f, certified=True)


def uncertified_action(a: GroupAction, B_f: Filtration, G_f: Filtration) -> SCFAction:
    """Filtration-preserving action without the bracket condition."""
    _check_parents(a, B_f, G_f)
    pres = preservation_violation(a, G_f)
    if pres is not None:
        raise pres
    return SCFAction(base=a, actor_f=B_f, target_f=G_f, certified=False)


def _require_certified(s: SCFAction, what: str) -> None:
    if not s.certified:
        raise ActionValidationError(f"{what} needs a certified action, got {s!r}", kind="uncertified")


# -----------------------------
# Semidirect products
# -----------------------------


@dataclass(frozen=True)
class SemidirectProduct:
    """B ⋉ G with (b, g) stored at index b·|G| + g, its filtration and the split structure maps."""

    group: FiniteGroup
    filtration: Filtration
    projection: Homomorphism
    section: Homomorphism
    inclusion: Homomorphism

    def pair(self, x: int) -> Tuple[int, int]:
        return divmod(x, self.inclusion.source.order)

    def index(self, b: int, g: int) -> int:
        return b * self.inclusion.source.order + g


def semidirect_group(a: GroupAction) -> FiniteGroup:
    """(b, g)(b', g') = (bb', (b'⁻¹·g) g'); the commutator of (b, 1) and (1, g) is (1, (b·g) g⁻¹)."""
    B, G = a.actor, a.target
    m = G.order
    bi, gi = np.divmod(np.arange(B.order * m), m)
    new_b = B.mul[bi[:, None], bi[None, :]]
    moved = a.table[B.inv[bi][None, :], gi[:, None]]
    new_g = G.mul[moved, gi[None, :]]
    names = [f"({B.names[b]},{G.names[g]})" for b, g in zip(bi, gi)]
    return validate_group(
        new_b * m + new_g,
        names=names,
        identity=B.identity * m + G.identity,
        label=f"{B.label}⋉{G.label}",
    )


def semidirect_filtration(a: GroupAction, B_f: Filtration, G_f: Filtration) -> Tuple[FiniteGroup, Filtration]:
    """(B⋉G)_i = B_i × G_i, without certifying anything."""
    _check_parents(a, B_f, G_f)
    group = semidirect_group(a)
    levels = []
    for i in range(1, max(B_f.length, G_f.length) + 1):
        inside = np.outer(B_f.level(i).indicator, G_f.level(i).indicator).reshape(-1)
        levels.append(Subgroup(group, mask_of(np.nonzero(inside)[0])))
    return group, Filtration(group, tuple(levels))


def semidirect_product(s: SCFAction) -> SemidirectProduct:
    _require_certified(s, "semidirect_product")
    B, G = s.actor, s.target
    group, F = semidirect_filtration(s.base, s.actor_f, s.target_f)
    violation = scf_violation(F)
    if violation is not None:
        raise InternalConsistencyError(f"semidirect filtration of a certified action fails: {violation}")
    m = G.order
    return SemidirectProduct(
        group=group,
        filtration=F,
        projection=Homomorphism(group, B, np.arange(group.order) // m),
        section=Homomorphism(B, group, np.arange(B.order) * m + G.identity),
        inclusion=Homomorphism(G, group, B.identity * m + np.arange(m)),
    )


# -----------------------------
# Restriction
# -----------------------------


def preserves_filtrations(alpha: Homomorphism, E_f: Filtration, B_f: Filtration) -> Optional[Tuple[int, int]]:
    """First (i, e) with α(e) ∉ B_i for e ∈ E_i, or None."""
    for i in range(1, max(E_f.length, B_f.length) + 1):
        Ei = E_f.level(i)
        images = alpha.table[list(Ei.members)]
        bad = np.nonzero(~B_f.level(i).indicator[images])[0]
        if bad.size:
            return i, Ei.members[int(bad[0])]
    return None


def restrict_action(alpha: Homomorphism, E_f: Filtration, s: SCFAction) -> SCFAction:
    """Pull the action of B_* on G_* back along α: E_* → B_*."""
    if E_f.parent != alpha.source:
        raise FiltrationError(f"filtration lives on {E_f.parent.label}, not {alpha.source.label}", kind="parent")
    hit = preserves_filtrations(alpha, E_f, s.actor_f)
    if hit is not None:
        i, e = hit
        raise ActionValidationError(
            f"{alpha.source.names[e]} ∈ E_{i} maps outside B_{i}", kind="filtration", witness=(i, e)
        )
    base = restrict_group_action(alpha, s.base)
    if not s.certified:
        return SCFAction(base=base, actor_f=E_f, target_f=s.target_f, certified=False)
    violation = scf_action_violation(base, E_f, s.target_f)
    if violation is not None:
        raise InternalConsistencyError(f"restriction of a certified action fails: {violation}")
    return SCFAction(base=base, actor_f=E_f, target_f=s.target_f, certified=True)


def restrict_to_stable_subgroup(a: GroupAction, B_f: Filtration, H_f: Filtration) -> Tuple[SCFAction, Homomorphism]:
    """The action on the B-stable group H_1 re-indexed as its own group, with the inclusion H_1 → G.

    The returned action is certified against H_* carried over to H_1.
    """
    H = H_f.top
    if not a.stabilizes(H):
        raise ActionValidationError(f"{H.describe()} is not stable under {a.actor.label}", kind="stability")
    H_grp, inclusion = H.as_group(label=f"{a.target.label}|{H.order}")
    lookup = np.full(a.target.order, -1, dtype=np.int64)
    lookup[inclusion.table] = np.arange(H_grp.order)
    table = lookup[a.table[:, inclusion.table]]
    restricted = validate_group_action(table, a.actor, H_grp)
    return validate_scf_action(restricted, B_f, restrict_to_subgroup(H_f, inclusion)), inclusion


# -----------------------------
# Equivariant morphisms
# -----------------------------


@dataclass(frozen=True)
class EquivariantMorphism:
    underlying: Homomorphism
    source_action: GroupAction
    target_action: GroupAction

    def __post_init__(self) -> None:
        f, X, Y = self.underlying, self.source_action, self.target_action
        if X.actor != Y.actor:
            raise ActionValidationError(f"actors differ: {X.actor.label} vs {Y.actor.label}", kind="actor")
        if f.source != X.target or f.target != Y.target:
            raise HomomorphismError(f"{f!r} does not go from {X.target.label} to {Y.target.label}", kind="malformed")
        diff = np.argwhere(f.table[X.table] != Y.table[:, f.table])
        if diff.size:
            e, x = (int(v) for v in diff[0])
            raise HomomorphismError(
                f"not equivariant at ({X.actor.names[e]}, {X.target.names[x]})", kind="equivariance", witness=(e, x)
            )

    def __call__(self, x: int) -> int:
        return self.underlying(x)

    @property
    def key(self) -> Tuple[int, ...]:
        return self.underlying.key


def is_equivariant(f: Homomorphism, X: GroupAction, Y: GroupAction) -> bool:
    return bool(np.array_equal(f.table[X.table], Y.table[:, f.table]))


def enumerate_equivariant_morphisms(
    X: GroupAction,
    Y: GroupAction,
    X_f: Optional[Filtration] = None,
    Y_f: Optional[Filtration] = None,
    budget: Budget = DEFAULT_BUDGET,
) -> List[EquivariantMorphism]:
    """Equivariant (and, given filtrations, level-preserving) homomorphisms X → Y in canonical order."""
    if X.actor != Y.actor:
        raise ActionValidationError(f"actors differ: {X.actor.label} vs {Y.actor.label}", kind="actor")
    out: List[EquivariantMorphism] = []
    for f in enumerate_homomorphisms(X.target, Y.target, budget):
        if not is_equivariant(f, X, Y):
            continue
        if X_f is not None and Y_f is not None and not filtration_contains(Y_f, image_filtration(f, X_f)):
            continue
        out.append(EquivariantMorphism(f, X, Y))
    logger.debug("equivariant %s → %s: %d", X.target.label, Y.target.label, len(out))
    return out


def image_point(f: EquivariantMorphism, K: SCFAction) -> SCFAction:
    """f(K_*) inside the target of f, with the B_*-action certified."""
    if f.source_action != K.base:
        raise ActionValidationError("morphism does not start at the given point", kind="source")
    return validate_scf_action(f.target_action, K.actor_f, image_filtration(f.underlying, K.target_f))
