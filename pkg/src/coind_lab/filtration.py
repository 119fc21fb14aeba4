from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import FiltrationError, InternalConsistencyError, NotStronglyCentral
from .groups import (
    FiniteGroup,
    FunctionGroup,
    Homomorphism,
    Subgroup,
    commutator_subgroup,
    mask_of,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Filtration:
    """Descending chain G_1 ⊇ G_2 ⊇ … ⊇ G_N of subgroups of ``parent``.

    Levels past N repeat G_N. Repeated tail entries are trimmed on construction, so two
    filtrations with the same levels at every index compare equal.
    """

    parent: FiniteGroup
    levels: Tuple[Subgroup, ...]

    def __post_init__(self) -> None:
        levels = tuple(self.levels)
        if not levels:
            raise FiltrationError("a filtration needs at least one level", kind="malformed")
        for k, H in enumerate(levels, start=1):
            if H.parent != self.parent:
                raise FiltrationError(
                    f"level {k} is a subgroup of {H.parent.label}, not {self.parent.label}", kind="parent", witness=(k,)
                )
        for k in range(len(levels) - 1):
            extra = levels[k + 1].mask & ~levels[k].mask
            if extra:
                g = (extra & -extra).bit_length() - 1
                raise FiltrationError(
                    f"level {k + 2} is not contained in level {k + 1} ({self.parent.names[g]})",
                    kind="descending",
                    witness=(k + 2, g),
                )
        while len(levels) > 1 and levels[-1] == levels[-2]:
            levels = levels[:-1]
        object.__setattr__(self, "levels", levels)

    @classmethod
    def from_members(cls, parent: FiniteGroup, levels: Iterable[Iterable[int]]) -> "Filtration":
        return cls(parent, tuple(Subgroup.from_members(parent, lv) for lv in levels))

    def __repr__(self) -> str:
        return f"Filtration({self.parent.label}, orders={list(self.orders)})"

    @property
    def length(self) -> int:
        return len(self.levels)

    def level(self, i: int) -> Subgroup:
        """G_i for i >= 1 under the tail convention."""
        if i < 1:
            raise FiltrationError(f"levels are indexed from 1, got {i}", kind="index", witness=(i,))
        return self.levels[min(i, self.length) - 1]

    @property
    def orders(self) -> Tuple[int, ...]:
        return tuple(H.order for H in self.levels)

    @property
    def top(self) -> Subgroup:
        return self.levels[0]

    def describe(self) -> str:
        return " ⊇ ".join(H.describe() for H in self.levels)

    def as_lists(self) -> List[List[int]]:
        return [list(H.members) for H in self.levels]


@dataclass(frozen=True)
class SCFCertificate:
    subject: Filtration
    verified: bool
    bound: int


def _first_bad_commutator(
    G: FiniteGroup, A: Subgroup, B: Subgroup, C: Subgroup
) -> Optional[Tuple[int, int]]:
    comm = G.commutator_table[np.ix_(list(A.members), list(B.members))]
    bad = np.argwhere(~C.indicator[comm])
    if not bad.size:
        return None
    r, c = bad[0]
    return A.members[int(r)], B.members[int(c)]


def scf_violation(F: Filtration) -> Optional[NotStronglyCentral]:
    G = F.parent
    N = F.length
    # i + j > N compares against G_N; indices past N repeat level N, so i, j <= N suffice
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            hit = _first_bad_commutator(G, F.level(i), F.level(j), F.level(i + j))
            if hit is not None:
                a, b = hit
                return NotStronglyCentral(
                    f"[G_{i}, G_{j}] ⊄ G_{i + j}: [{G.names[a]}, {G.names[b]}] = {G.names[G.commutator(a, b)]}",
                    i=i,
                    j=j,
                    witness=(a, b),
                )
    return None


def validate_scf(F: Filtration) -> SCFCertificate:
    """Certify [G_i, G_j] ⊆ G_{i+j}; raises ``NotStronglyCentral`` at the least (i, j) otherwise."""
    violation = scf_violation(F)
    if violation is not None:
        raise violation
    return SCFCertificate(subject=F, verified=True, bound=F.length)


def is_strongly_central(F: Filtration) -> bool:
    return scf_violation(F) is None


def _certified(F: Filtration, what: str) -> Filtration:
    violation = scf_violation(F)
    if violation is not None:
        raise InternalConsistencyError(f"{what} is not strongly central: {violation}")
    return F


def constant_filtration(H: Subgroup) -> Filtration:
    return Filtration(H.parent, (H,))


def lower_central_series(G: FiniteGroup) -> Filtration:
    """γ_1 = G, γ_{k+1} = [G, γ_k], iterated until a term repeats."""
    terms = [G.full]
    while True:
        nxt = commutator_subgroup(G, G.full, terms[-1])
        if nxt == terms[-1]:
            break
        terms.append(nxt)
    F = _certified(Filtration(G, tuple(terms)), f"lower central series of {G.label}")
    logger.debug("lcs(%s) orders %s", G.label, F.orders)
    return F


def stretched_lcs(G: FiniteGroup, step: int = 1, shift: int = 0) -> Filtration:
    """G_i = γ_{shift + ⌈i/step⌉}; strongly central for every step >= 1 and shift >= 0."""
    if step < 1 or shift < 0:
        raise FiltrationError(f"need step >= 1 and shift >= 0, got step={step}, shift={shift}", kind="malformed")
    lcs = lower_central_series(G)
    count = step * (lcs.length + 1)
    levels = tuple(lcs.level(shift + math.ceil(i / step)) for i in range(1, count + 1))
    return _certified(Filtration(G, levels), "stretched lower central series")


def filtration_contains(F: Filtration, H: Filtration) -> bool:
    """H_i ⊆ F_i at every index."""
    if F.parent != H.parent:
        raise FiltrationError("filtrations of different groups", kind="parent")
    bound = max(F.length, H.length)
    return all(H.level(i).mask & ~F.level(i).mask == 0 for i in range(1, bound + 1))


def intersect_filtrations(filtrations: Sequence[Filtration]) -> Filtration:
    if not filtrations:
        raise FiltrationError("cannot intersect an empty list of filtrations", kind="malformed")
    parent = filtrations[0].parent
    for F in filtrations[1:]:
        if F.parent != parent:
            raise FiltrationError(
                f"filtrations of different groups ({parent.label} vs {F.parent.label})", kind="parent"
            )
    bound = max(F.length for F in filtrations)
    levels = []
    for i in range(1, bound + 1):
        mask = filtrations[0].level(i).mask
        for F in filtrations[1:]:
            mask &= F.level(i).mask
        levels.append(Subgroup(parent, mask))
    out = Filtration(parent, tuple(levels))
    if all(is_strongly_central(F) for F in filtrations):
        _certified(out, "intersection of strongly central filtrations")
    return out


def image_filtration(f: Homomorphism, K: Filtration) -> Filtration:
    if f.source != K.parent:
        raise FiltrationError(f"map source {f.source.label} is not the filtered group {K.parent.label}", kind="parent")
    return Filtration(f.target, tuple(f.image(H) for H in K.levels))


def preimage_filtration(f: Homomorphism, F: Filtration) -> Filtration:
    if f.target != F.parent:
        raise FiltrationError(f"map target {f.target.label} is not the filtered group {F.parent.label}", kind="parent")
    levels = tuple(
        Subgroup(f.source, mask_of(np.nonzero(H.indicator[f.table])[0])) for H in F.levels
    )
    return Filtration(f.source, levels)


def restrict_to_subgroup(F: Filtration, inclusion: Homomorphism) -> Filtration:
    """F_i ∩ H re-indexed on H, for an injective ``inclusion`` H → G."""
    if not inclusion.is_injective():
        raise FiltrationError("restriction needs an injective inclusion", kind="inclusion")
    return preimage_filtration(inclusion, F)


def pointwise_filtration(carrier: FunctionGroup, Y_f: Filtration) -> Filtration:
    """Level i holds the maps whose every value lies in Y_i."""
    if carrier.codomain != Y_f.parent:
        raise FiltrationError(
            f"maps land in {carrier.codomain.label}, filtration lives on {Y_f.parent.label}", kind="parent"
        )
    levels = []
    for H in Y_f.levels:
        inside = np.all(H.indicator[carrier.maps], axis=1)
        levels.append(Subgroup(carrier.group, mask_of(np.nonzero(inside)[0])))
    return Filtration(carrier.group, tuple(levels))
