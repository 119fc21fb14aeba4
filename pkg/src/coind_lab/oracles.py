"""Brute-force references, element by element, for the table-level constructions they check."""

from __future__ import annotations

import itertools
import logging
from typing import List, Set, Tuple

from .action import GroupAction
from .config import DEFAULT_BUDGET, Budget
from .errors import BudgetExceeded, InternalConsistencyError
from .filtration import Filtration, filtration_contains
from .groups import FiniteGroup, all_subgroups

logger = logging.getLogger(__name__)

ORACLE_MAX_ORDER = 8
ORACLE_MAX_LENGTH = 3


def _closure(G: FiniteGroup, seed: Set[int]) -> Set[int]:
    members = {G.identity} | set(seed)
    while True:
        new = {G.op(a, b) for a in members for b in members} - members
        if not new:
            return members
        members |= new


def oracle_lower_central_series(G: FiniteGroup) -> List[Set[int]]:
    """γ_k as plain sets: close the set of all commutators [g, h], h ∈ γ_k, under products."""
    terms = [set(G.elements)]
    while True:
        commutators = {G.op(G.op(g, h), G.op(G.inverse(g), G.inverse(h))) for g in G.elements for h in terms[-1]}
        nxt = _closure(G, commutators)
        if nxt == terms[-1]:
            return terms
        terms.append(nxt)


def oracle_is_strongly_central(F: Filtration) -> bool:
    """Pair check up to 2N + 1, element by element."""
    G = F.parent
    bound = 2 * F.length + 1
    for i in range(1, bound + 1):
        for j in range(1, bound + 1):
            target = F.level(i + j)
            for a in F.level(i).members:
                for b in F.level(j).members:
                    if G.commutator(a, b) not in target:
                        return False
    return True


def oracle_acts_filtered(a: GroupAction, B_f: Filtration, H: Filtration) -> bool:
    """B_1 keeps every level and (b·g)g⁻¹ ∈ H_{i+j} for b ∈ B_i, g ∈ H_j, pairs up to 2N + 1."""
    G = a.target
    for level in H.levels:
        if any(a.act(b, g) not in level for b in B_f.level(1).members for g in level.members):
            return False
    bound = 2 * max(B_f.length, H.length) + 1
    for i in range(1, bound + 1):
        for j in range(1, bound + 1):
            target = H.level(i + j)
            for b in B_f.level(i).members:
                for g in H.level(j).members:
                    if G.op(a.act(b, g), G.inverse(g)) not in target:
                        return False
    return True


def oracle_max_subfiltration(
    B_f: Filtration,
    G_f: Filtration,
    a: GroupAction,
    max_order: int = ORACLE_MAX_ORDER,
    max_length: int = ORACLE_MAX_LENGTH,
    budget: Budget = DEFAULT_BUDGET,
) -> Filtration:
    """The greatest sub-filtration of G_* carrying a certified B_*-action, by exhaustive search.

    Chains of subgroups of length up to ``max_length`` are enumerated; the unique maximum among
    the valid ones is returned.
    """
    G = a.target
    if G.order > max_order:
        raise BudgetExceeded("oracle group order", G.order, max_order)
    if G_f.length > max_length:
        raise BudgetExceeded("oracle filtration length", G_f.length, max_length)
    subgroups = all_subgroups(G, budget)
    budget.require("oracle chains", len(subgroups) ** max_length, budget.max_candidates)

    valid: List[Filtration] = []
    seen: Set[Filtration] = set()
    for chain in itertools.product(subgroups, repeat=max_length):
        if any(chain[k + 1].mask & ~chain[k].mask for k in range(max_length - 1)):
            continue
        H = Filtration(G, tuple(chain))
        if H in seen:
            continue
        seen.add(H)
        if not filtration_contains(G_f, H) or not oracle_is_strongly_central(H):
            continue
        if oracle_acts_filtered(a, B_f, H):
            valid.append(H)

    maxima = [H for H in valid if all(filtration_contains(H, K) for K in valid)]
    if len(maxima) != 1:
        raise InternalConsistencyError(f"expected a unique maximal sub-filtration, found {len(maxima)}")
    logger.debug("oracle: %d valid chains, maximum %s", len(valid), maxima[0].orders)
    return maxima[0]


def lcs_orders(G: FiniteGroup) -> Tuple[int, ...]:
    return tuple(len(t) for t in oracle_lower_central_series(G))
