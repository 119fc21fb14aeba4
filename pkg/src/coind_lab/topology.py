"""Finite spaces and finite topological groups.

A topology on {0, …, n-1} is stored as its minimal open neighbourhoods: ``nb[x, y]`` is True
when y lies in every open set containing x. A set is open exactly when it contains the
neighbourhood of each of its points.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .action import GroupAction
from .config import DEFAULT_BUDGET, Budget
from .errors import (
    ContinuityError,
    InternalConsistencyError,
    SubgroupError,
    TopGroupValidationError,
    TopologyValidationError,
)
from .groups import (
    FiniteGroup,
    FunctionGroup,
    Subgroup,
    indices_of,
    mask_of,
    normal_subgroups,
    pointwise_group,
    row_indices,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FiniteTopology:
    nb: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteTopology):
            return NotImplemented
        return np.array_equal(self.nb, other.nb)

    def __hash__(self) -> int:
        return hash(self.nb.tobytes())

    def __repr__(self) -> str:
        kind = "discrete" if self.is_discrete() else "indiscrete" if self.is_indiscrete() else "mixed"
        return f"FiniteTopology(size={self.size}, {kind})"

    @property
    def size(self) -> int:
        return self.nb.shape[0]

    def neighbourhood(self, x: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in np.nonzero(self.nb[x])[0])

    def is_open(self, members: Iterable[int]) -> bool:
        idx = list(members)
        inside = np.zeros(self.size, dtype=bool)
        inside[idx] = True
        return bool(np.all(inside[np.nonzero(self.nb[idx].any(axis=0))[0]])) if idx else True

    def is_discrete(self) -> bool:
        return bool(np.array_equal(self.nb, np.eye(self.size, dtype=bool)))

    def is_indiscrete(self) -> bool:
        return bool(np.all(self.nb))

    def opens(self, budget: Budget = DEFAULT_BUDGET) -> List[int]:
        """Every open set as a bitmask, sorted; refuses past ``budget.max_opens``."""
        basics = {mask_of(np.nonzero(row)[0]) for row in self.nb}
        found = {0}
        for U in sorted(basics):
            found |= {O | U for O in found}
            budget.require("open sets", len(found), budget.max_opens)
        return sorted(found)


def topology_from_nb(nb: np.ndarray) -> FiniteTopology:
    arr = np.array(nb, dtype=bool)
    arr.setflags(write=False)
    return FiniteTopology(arr)


def discrete(n: int) -> FiniteTopology:
    return topology_from_nb(np.eye(n, dtype=bool))


def indiscrete(n: int) -> FiniteTopology:
    return topology_from_nb(np.ones((n, n), dtype=bool))


def validate_topology(family: Sequence[Iterable[int]], n: int, budget: Budget = DEFAULT_BUDGET) -> FiniteTopology:
    """Certify an open-set family on {0, …, n-1}.

    Checks run in the order: malformed sets, ∅ and the whole set present, unions, intersections.
    """
    if n < 1:
        raise TopologyValidationError(f"carrier size must be positive, got {n}", kind="malformed")
    opens: List[int] = []
    for k, raw in enumerate(family):
        members = list(raw)
        for x in members:
            if isinstance(x, bool) or not isinstance(x, (int, np.integer)) or not 0 <= int(x) < n:
                raise TopologyValidationError(f"open #{k} has bad element {x!r}", kind="malformed", witness=(k, x))
        opens.append(mask_of(members))
    present = set(opens)
    full = (1 << n) - 1
    if 0 not in present:
        raise TopologyValidationError("the empty set is not open", kind="empty")
    if full not in present:
        raise TopologyValidationError("the whole carrier is not open", kind="full")
    distinct = sorted(present)
    budget.require("open-set pairs", len(distinct) ** 2, budget.max_candidates)
    for A, B in itertools.combinations(distinct, 2):
        if A | B not in present:
            raise TopologyValidationError(
                f"union of {indices_of(A)} and {indices_of(B)} is not open",
                kind="union",
                witness=(indices_of(A), indices_of(B)),
            )
    for A, B in itertools.combinations(distinct, 2):
        if A & B not in present:
            raise TopologyValidationError(
                f"intersection of {indices_of(A)} and {indices_of(B)} is not open",
                kind="intersection",
                witness=(indices_of(A), indices_of(B)),
            )
    nb = np.zeros((n, n), dtype=bool)
    for x in range(n):
        U = full
        for O in distinct:
            if (O >> x) & 1:
                U &= O
        nb[x, list(indices_of(U))] = True
    return topology_from_nb(nb)


def generated_topology(n: int, subbasis: Sequence[Iterable[int]]) -> FiniteTopology:
    """Coarsest topology in which every subbasic set is open."""
    S = np.zeros((len(subbasis), n), dtype=bool)
    for k, members in enumerate(subbasis):
        S[k, list(members)] = True
    return _generated_from_matrix(n, S)


def _generated_from_matrix(n: int, S: np.ndarray) -> FiniteTopology:
    if S.size == 0:
        return indiscrete(n)
    # y ∈ U_x unless some subbasic set holds x but not y
    separated = S.T.astype(np.int64) @ (~S).astype(np.int64)
    return topology_from_nb(separated == 0)


def initial_topology(n: int, maps: Sequence[Tuple[np.ndarray, FiniteTopology]]) -> FiniteTopology:
    """Coarsest topology on n points making every f: n → (Y, τ_Y) continuous."""
    nb = np.ones((n, n), dtype=bool)
    for f, Y in maps:
        f = np.asarray(f)
        nb &= Y.nb[f[:, None], f[None, :]]
    return topology_from_nb(nb)


def product_topology(X: FiniteTopology, Y: FiniteTopology) -> FiniteTopology:
    """On pairs (x, y) stored at x·|Y| + y."""
    return topology_from_nb(np.kron(X.nb, Y.nb))


def subspace_topology(X: FiniteTopology, members: Sequence[int]) -> FiniteTopology:
    """Induced topology, re-indexed by position in ``members``."""
    idx = list(members)
    return topology_from_nb(X.nb[np.ix_(idx, idx)])


def is_finer(A: FiniteTopology, B: FiniteTopology) -> bool:
    """Every B-open set is A-open."""
    return bool(np.all(~A.nb | B.nb))


def continuity_violation(f: Sequence[int], X: FiniteTopology, Y: FiniteTopology) -> Optional[Tuple[int, int]]:
    """First (x, z) with z near x but f(z) not near f(x), or None."""
    f = np.asarray(f)
    for x in range(X.size):
        near = np.nonzero(X.nb[x])[0]
        bad = np.nonzero(~Y.nb[f[x], f[near]])[0]
        if bad.size:
            return x, int(near[bad[0]])
    return None


def is_continuous(f: Sequence[int], X: FiniteTopology, Y: FiniteTopology) -> bool:
    return continuity_violation(f, X, Y) is None


def continuous_rows(rows: np.ndarray, X: FiniteTopology, Y: FiniteTopology) -> np.ndarray:
    """Mask of the rows (maps X → Y) that are continuous."""
    pairs = np.argwhere(X.nb)
    return np.all(Y.nb[rows[:, pairs[:, 0]], rows[:, pairs[:, 1]]], axis=1)


# -----------------------------
# Topological groups
# -----------------------------


@dataclass(frozen=True)
class TopGroup:
    group: FiniteGroup
    topology: FiniteTopology

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def core(self) -> Subgroup:
        """Minimal open neighbourhood of the identity; a normal subgroup."""
        return Subgroup(self.group, mask_of(np.nonzero(self.topology.nb[self.group.identity])[0]))

    def __repr__(self) -> str:
        return f"TopGroup({self.group.label}, {self.topology!r})"


def coset_topology(G: FiniteGroup, N: Subgroup) -> FiniteTopology:
    """Opens are unions of left cosets gN."""
    return topology_from_nb(N.indicator[G.mul[G.inv[:, None], np.arange(G.order)[None, :]]])


def group_topologies(G: FiniteGroup, budget: Budget = DEFAULT_BUDGET) -> List[FiniteTopology]:
    """All group topologies on G, one per normal subgroup, coarsest last."""
    return [coset_topology(G, N) for N in normal_subgroups(G, budget)]


def _translation_violation(G: FiniteGroup, nb: np.ndarray) -> Optional[Tuple[int, int]]:
    n = G.order
    for g in range(n):
        left = G.mul[g]
        if not np.all(nb[left[:, None], left[None, :]] | ~nb):
            x = next(x for x in range(n) if not np.all(nb[left[x], left[nb[x]]]))
            return g, x
        right = G.mul[:, g]
        if not np.all(nb[right[:, None], right[None, :]] | ~nb):
            x = next(x for x in range(n) if not np.all(nb[right[x], right[nb[x]]]))
            return x, g
    return None


def validate_topgroup(G: FiniteGroup, tau: FiniteTopology) -> TopGroup:
    """Certify (G, τ); inversion is checked before multiplication.

    Multiplication is continuous at (g, h) iff U_g·U_h ⊆ U_gh; with all translations
    continuous this reduces to U_e·U_e ⊆ U_e.
    """
    if tau.size != G.order:
        raise TopGroupValidationError(
            f"topology on {tau.size} points for a group of order {G.order}", operation="carrier", point=None, open_set=()
        )
    hit = continuity_violation(G.inv, tau, tau)
    if hit is not None:
        g, _ = hit
        target = G.inverse(g)
        raise TopGroupValidationError(
            f"{G.label}: inversion is not continuous at {G.names[g]}",
            operation="inversion",
            point=g,
            open_set=tau.neighbourhood(target),
        )
    hit = _translation_violation(G, tau.nb)
    if hit is None:
        core = np.nonzero(tau.nb[G.identity])[0]
        products = G.mul[np.ix_(core, core)]
        if not np.all(tau.nb[G.identity][products]):
            hit = (G.identity, G.identity)
    if hit is not None:
        g, h = hit
        raise TopGroupValidationError(
            f"{G.label}: multiplication is not continuous at ({G.names[g]}, {G.names[h]})",
            operation="multiplication",
            point=(g, h),
            open_set=tau.neighbourhood(G.op(g, h)),
        )

    top = TopGroup(G, tau)
    try:
        N = Subgroup.from_members(G, top.core.members)
    except SubgroupError as e:
        raise InternalConsistencyError(f"{G.label}: neighbourhood of the identity is not a subgroup") from e
    if not N.is_normal() or coset_topology(G, N) != tau:
        raise InternalConsistencyError(f"{G.label}: group topology is not the coset topology of its core")
    return top


# -----------------------------
# Function spaces
# -----------------------------


def all_maps(n_from: int, n_to: int, budget: Budget = DEFAULT_BUDGET) -> np.ndarray:
    budget.require("set maps", n_to ** n_from, budget.max_set_maps)
    return np.array(list(itertools.product(range(n_to), repeat=n_from)), dtype=np.int64).reshape(-1, n_from)


def compact_open_subbasis(
    B: FiniteTopology, Y: FiniteTopology, rows: np.ndarray, budget: Budget = DEFAULT_BUDGET
) -> np.ndarray:
    """Boolean matrix of the sets W(K, U) = {u : u(K) ⊆ U}, K ⊆ B (all compact), U open in Y."""
    opens = Y.opens(budget)
    budget.require("compact-open subbasic sets", (2 ** B.size) * len(opens), budget.max_opens)
    U = np.zeros((len(opens), Y.size), dtype=bool)
    for k, O in enumerate(opens):
        U[k, list(indices_of(O))] = True
    inside = U[:, rows]  # inside[U, u, b] = u(b) ∈ U
    sets = []
    for r in range(1, B.size + 1):
        for K in itertools.combinations(range(B.size), r):
            sets.append(np.all(inside[:, :, list(K)], axis=2))
    sets.append(np.ones((len(opens), len(rows)), dtype=bool))  # K = ∅
    return np.concatenate(sets, axis=0)


def compact_open_topology(
    B: FiniteTopology, Y: FiniteTopology, rows: np.ndarray, budget: Budget = DEFAULT_BUDGET
) -> FiniteTopology:
    return _generated_from_matrix(len(rows), compact_open_subbasis(B, Y, rows, budget))


def pointwise_topology(Y: FiniteTopology, rows: np.ndarray) -> FiniteTopology:
    """Product topology on maps from a finite set: v is near u iff v(b) is near u(b) for all b."""
    nb = np.all(Y.nb[rows[:, None, :], rows[None, :, :]], axis=2)
    return topology_from_nb(nb)


def continuous_maps_space(
    B: FiniteTopology, Y: FiniteTopology, budget: Budget = DEFAULT_BUDGET
) -> Tuple[np.ndarray, FiniteTopology]:
    """C(B, Y) as rows of values with the compact-open topology."""
    rows = all_maps(B.size, Y.size, budget)
    rows = rows[continuous_rows(rows, B, Y)]
    return rows, compact_open_topology(B, Y, rows, budget)


def continuous_maps_group(B: TopGroup, Y: TopGroup, budget: Budget = DEFAULT_BUDGET) -> Tuple[TopGroup, FunctionGroup]:
    """C(B, Y) under the pointwise product, with the compact-open topology."""
    rows = all_maps(B.order, Y.order, budget)
    rows = rows[continuous_rows(rows, B.topology, Y.topology)]
    maps = pointwise_group(Y.group, rows, label=f"C({B.group.label},{Y.group.label})")
    tau = compact_open_topology(B.topology, Y.topology, maps.maps, budget)
    return validate_topgroup(maps.group, tau), maps


@dataclass(frozen=True)
class CurryReport:
    left_count: int
    right_count: int
    bijective: bool
    witness: Tuple[int, ...] = ()


def curry_check(B: FiniteTopology, X: FiniteTopology, Y: FiniteTopology, budget: Budget = DEFAULT_BUDGET) -> CurryReport:
    """Compare continuous B × X → Y with continuous X → C(B, Y) through F ↦ (x ↦ F(-, x))."""
    pair_top = product_topology(B, X)
    left = all_maps(B.size * X.size, Y.size, budget)
    left = left[continuous_rows(left, pair_top, Y)]

    c_rows, c_top = continuous_maps_space(B, Y, budget)
    right = all_maps(X.size, len(c_rows), budget)
    right = right[continuous_rows(right, X, c_top)]

    # F stored at b·|X| + x; curried[x] = row index of b ↦ F(b, x)
    curried = np.stack(
        [row_indices(c_rows, left.reshape(len(left), B.size, X.size)[:, :, x]) for x in range(X.size)], axis=1
    ) if len(left) else np.zeros((0, X.size), dtype=np.int64)
    if np.any(curried < 0):
        k = int(np.nonzero(np.any(curried < 0, axis=1))[0][0])
        return CurryReport(len(left), len(right), False, tuple(int(v) for v in left[k]))
    hits = row_indices(right, curried) if len(curried) else np.zeros(0, dtype=np.int64)
    if np.any(hits < 0):
        k = int(np.nonzero(hits < 0)[0][0])
        return CurryReport(len(left), len(right), False, tuple(int(v) for v in left[k]))
    bijective = len(np.unique(hits)) == len(left) == len(right)
    return CurryReport(len(left), len(right), bijective)


# -----------------------------
# Continuous actions
# -----------------------------


@dataclass(frozen=True)
class ContinuousAction:
    actor: TopGroup
    target: TopGroup
    action: GroupAction
    jointly_continuous: bool


def automorphism_continuity_violation(G: TopGroup, a: GroupAction) -> Optional[Tuple[int, int]]:
    for b in a.actor.elements:
        hit = continuity_violation(a.table[b], G.topology, G.topology)
        if hit is not None:
            return b, hit[0]
    return None


def joint_continuity_violation(B: TopGroup, G: TopGroup, a: GroupAction) -> Optional[Tuple[int, int]]:
    """First (b, g) with U_b · U_g ⊄ U_(b·g) under the action."""
    for b in a.actor.elements:
        ub = np.nonzero(B.topology.nb[b])[0]
        for g in a.target.elements:
            ug = np.nonzero(G.topology.nb[g])[0]
            if not np.all(G.topology.nb[a.table[b, g]][a.table[np.ix_(ub, ug)]]):
                return b, g
    return None


def validate_continuous_action(B: TopGroup, G: TopGroup, a: GroupAction, joint: bool = True) -> ContinuousAction:
    """Per-element continuity first, then (when ``joint``) continuity of B × G → G."""
    if a.actor != B.group or a.target != G.group:
        raise ContinuityError("action does not match the topological groups", kind="parent")
    hit = automorphism_continuity_violation(G, a)
    if hit is not None:
        b, g = hit
        raise ContinuityError(
            f"{B.group.names[b]} acts discontinuously at {G.group.names[g]}", kind="automorphism", witness=hit
        )
    if joint:
        hit = joint_continuity_violation(B, G, a)
        if hit is not None:
            b, g = hit
            raise ContinuityError(
                f"action is not jointly continuous at ({B.group.names[b]}, {G.group.names[g]})",
                kind="joint",
                witness=hit,
            )
    return ContinuousAction(actor=B, target=G, action=a, jointly_continuous=joint)
