from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_BUDGET, Budget
from .errors import GroupValidationError, HomomorphismError, SubgroupError

logger = logging.getLogger(__name__)


# -----------------------------
# Bitset helpers
# -----------------------------


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << int(i)
    return mask


def indices_of(mask: int) -> Tuple[int, ...]:
    out: List[int] = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _frozen(values, dtype=np.int64) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def row_indices(reference: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Position of each row of ``rows`` inside ``reference`` (-1 when absent)."""
    reference = np.asarray(reference)
    rows = np.asarray(rows)
    if rows.size == 0:
        return np.zeros(0, dtype=np.int64)
    stacked = np.vstack([reference, rows])
    uniq, inverse = np.unique(stacked, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    pos = np.full(len(uniq), -1, dtype=np.int64)
    pos[inverse[: len(reference)]] = np.arange(len(reference))
    return pos[inverse[len(reference):]]


# -----------------------------
# Finite groups
# -----------------------------


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A certified finite group on the dense index range 0..order-1.

    Build instances through ``validate_group``; the constructor does not check axioms.
    """

    names: Tuple[str, ...]
    mul: np.ndarray
    identity: int
    inv: np.ndarray
    label: str = "G"

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (
            self.order == other.order
            and self.identity == other.identity
            and np.array_equal(self.mul, other.mul)
        )

    def __hash__(self) -> int:
        return hash((self.order, self.identity, self.mul.tobytes()))

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label}, order={self.order})"

    @property
    def order(self) -> int:
        return len(self.names)

    @property
    def elements(self) -> range:
        return range(self.order)

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a b a⁻¹ b⁻¹."""
        return int(self.commutator_table[a, b])

    def conjugate(self, g: int, x: int) -> int:
        """g x g⁻¹."""
        return int(self.conjugation_table[g, x])

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"{self.label}: no element named '{name}'") from None

    def power(self, g: int, k: int) -> int:
        x = self.identity
        for _ in range(k % self.element_orders[g]):
            x = int(self.mul[x, g])
        return x

    def describe(self, members: Iterable[int]) -> str:
        return "{" + ", ".join(self.names[i] for i in members) + "}"

    @cached_property
    def commutator_table(self) -> np.ndarray:
        ab = self.mul
        inv_ab = self.mul[self.inv[:, None], self.inv[None, :]]
        return _frozen(self.mul[ab, inv_ab])

    @cached_property
    def conjugation_table(self) -> np.ndarray:
        # row g, column x → g x g⁻¹
        gx = self.mul
        return _frozen(self.mul[gx, self.inv[:, None]])

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.order, dtype=np.int64)
        for g in self.elements:
            x, k = g, 1
            while x != self.identity:
                x = int(self.mul[x, g])
                k += 1
            orders[g] = k
        return _frozen(orders)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def generators(self) -> Tuple[int, ...]:
        gens: List[int] = []
        reached = 1 << self.identity
        for g in self.elements:
            if not (reached >> g) & 1:
                gens.append(g)
                reached = generate_subgroup(self, gens).mask
        return tuple(gens)

    @cached_property
    def spanning_tree(self) -> Tuple[Tuple[int, int, int], ...]:
        """BFS words over ``generators``: triples (x, parent, k) with x = parent · gens[k]."""
        seen = {self.identity}
        order: List[Tuple[int, int, int]] = []
        frontier = [self.identity]
        while frontier:
            nxt: List[int] = []
            for p in frontier:
                for k, s in enumerate(self.generators):
                    x = int(self.mul[p, s])
                    if x not in seen:
                        seen.add(x)
                        order.append((x, p, k))
                        nxt.append(x)
            frontier = nxt
        return tuple(order)

    @property
    def full(self) -> "Subgroup":
        return Subgroup(self, (1 << self.order) - 1)

    @property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, 1 << self.identity)


def validate_group(
    mul: Sequence[Sequence[int]],
    names: Optional[Sequence[str]] = None,
    identity: Optional[int] = None,
    order: Optional[int] = None,
    label: str = "G",
) -> FiniteGroup:
    """Certify raw tables as a group.

    Axioms are checked in the order: table shape, associativity, identity, inverses.
    The first failure raises ``GroupValidationError`` with witnessing indices.
    """
    try:
        table = np.asarray(mul)
    except (TypeError, ValueError) as e:
        raise GroupValidationError(f"{label}: multiplication table is not rectangular", kind="malformed") from e
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise GroupValidationError(f"{label}: multiplication table must be a non-empty square", kind="malformed")
    if table.dtype.kind not in "iu":
        raise GroupValidationError(f"{label}: table entries must be integer indices", kind="malformed")
    n = table.shape[0]
    if order is not None and order != n:
        raise GroupValidationError(f"{label}: declared order {order} but table has {n} rows", kind="malformed")
    bad = np.argwhere((table < 0) | (table >= n))
    if bad.size:
        a, b = (int(v) for v in bad[0])
        raise GroupValidationError(f"{label}: entry ({a}, {b}) out of range", kind="malformed", witness=(a, b))
    table = table.astype(np.int64)

    if names is None:
        names = [f"g{i}" for i in range(n)]
    names = tuple(str(x) for x in names)
    if len(names) != n:
        raise GroupValidationError(f"{label}: {len(names)} names for order {n}", kind="malformed")
    if len(set(names)) != n:
        raise GroupValidationError(f"{label}: element names are not unique", kind="malformed")

    for a in range(n):
        left = table[table[a]]  # (ab)c
        right = table[a][table]  # a(bc)
        diff = np.argwhere(left != right)
        if diff.size:
            b, c = (int(v) for v in diff[0])
            raise GroupValidationError(
                f"{label}: not associative at ({names[a]}, {names[b]}, {names[c]})",
                kind="associativity",
                witness=(a, b, c),
            )

    if identity is None:
        identity = names.index("1") if "1" in names else 0
    if not 0 <= identity < n:
        raise GroupValidationError(f"{label}: identity index {identity} out of range", kind="malformed")
    arange = np.arange(n)
    not_unit = np.nonzero((table[identity] != arange) | (table[:, identity] != arange))[0]
    if not_unit.size:
        g = int(not_unit[0])
        raise GroupValidationError(
            f"{label}: {names[identity]} is not a two-sided identity (fails at {names[g]})",
            kind="identity",
            witness=(identity, g),
        )

    inv = np.empty(n, dtype=np.int64)
    for g in range(n):
        cands = np.nonzero((table[g] == identity) & (table[:, g] == identity))[0]
        if not cands.size:
            raise GroupValidationError(f"{label}: {names[g]} has no two-sided inverse", kind="inverse", witness=(g,))
        inv[g] = cands[0]

    table.setflags(write=False)
    inv.setflags(write=False)
    return FiniteGroup(names=names, mul=table, identity=int(identity), inv=inv, label=label)


def group_from_function(
    elements: Sequence,
    mul,
    names: Optional[Sequence[str]] = None,
    identity: int = 0,
    label: str = "G",
) -> FiniteGroup:
    """Tabulate a multiplication given on arbitrary hashable elements.

    ``identity`` is a position in ``elements`` (the first element by default).
    """
    position = {x: i for i, x in enumerate(elements)}
    table = [[position[mul(a, b)] for b in elements] for a in elements]
    return validate_group(table, names=names or [str(x) for x in elements], identity=identity, label=label)


# -----------------------------
# Subgroups
# -----------------------------


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    mask: int

    def __repr__(self) -> str:
        return f"Subgroup({self.parent.label}, {self.parent.describe(self.members)})"

    @classmethod
    def from_members(cls, parent: FiniteGroup, members: Iterable[int]) -> "Subgroup":
        idx = _checked_indices(parent, members)
        if parent.identity not in idx:
            raise SubgroupError(f"{parent.label}: subset misses the identity", kind="identity", witness=(parent.identity,))
        arr = np.array(sorted(set(idx)), dtype=np.int64)
        inside = np.zeros(parent.order, dtype=bool)
        inside[arr] = True
        prods = parent.mul[np.ix_(arr, arr)]
        bad = np.argwhere(~inside[prods])
        if bad.size:
            a, b = (int(arr[v]) for v in bad[0])
            raise SubgroupError(
                f"{parent.label}: subset not closed, {parent.names[a]}·{parent.names[b]} escapes",
                kind="closure",
                witness=(a, b),
            )
        return cls(parent, mask_of(arr))

    @cached_property
    def members(self) -> Tuple[int, ...]:
        return indices_of(self.mask)

    @cached_property
    def indicator(self) -> np.ndarray:
        ind = np.zeros(self.parent.order, dtype=bool)
        ind[list(self.members)] = True
        ind.setflags(write=False)
        return ind

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, g: int) -> bool:
        return bool((self.mask >> int(g)) & 1)

    def issubset(self, other: "Subgroup") -> bool:
        _same_parent(self, other)
        return self.mask & ~other.mask == 0

    def __le__(self, other: "Subgroup") -> bool:
        return self.issubset(other)

    def __and__(self, other: "Subgroup") -> "Subgroup":
        _same_parent(self, other)
        return Subgroup(self.parent, self.mask & other.mask)

    def is_normal(self) -> bool:
        conj = self.parent.conjugation_table[:, list(self.members)]
        return bool(np.all(self.indicator[conj]))

    def as_group(self, label: Optional[str] = None) -> Tuple[FiniteGroup, "Homomorphism"]:
        """Re-index the members 0..|H|-1 (ascending) and return the group with its inclusion."""
        G = self.parent
        members = np.array(self.members, dtype=np.int64)
        lookup = np.full(G.order, -1, dtype=np.int64)
        lookup[members] = np.arange(len(members))
        table = lookup[G.mul[np.ix_(members, members)]]
        H = validate_group(
            table,
            names=[G.names[i] for i in members],
            identity=int(lookup[G.identity]),
            label=label or f"{G.label}<{len(members)}>",
        )
        return H, Homomorphism(H, G, members)

    def describe(self) -> str:
        return self.parent.describe(self.members)


def _same_parent(a: Subgroup, b: Subgroup) -> None:
    if a.parent is not b.parent and a.parent != b.parent:
        raise SubgroupError(
            f"subgroups of different groups ({a.parent.label} vs {b.parent.label})", kind="parent"
        )


def _checked_indices(G: FiniteGroup, seed: Iterable[int]) -> List[int]:
    out: List[int] = []
    for x in seed:
        if isinstance(x, (bool, np.bool_)) or not isinstance(x, (int, np.integer)):
            raise SubgroupError(f"{G.label}: element index {x!r} is not an integer", kind="malformed", witness=(x,))
        if not 0 <= int(x) < G.order:
            raise SubgroupError(f"{G.label}: element index {x} out of range", kind="range", witness=(int(x),))
        out.append(int(x))
    return out


def generate_subgroup(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``seed`` (closure under right multiplication)."""
    gens = np.unique(np.array(_checked_indices(G, seed), dtype=np.int64))
    inside = np.zeros(G.order, dtype=bool)
    inside[G.identity] = True
    frontier = np.array([G.identity], dtype=np.int64)
    while frontier.size and gens.size:
        reached = np.unique(G.mul[np.ix_(frontier, gens)])
        new = reached[~inside[reached]]
        inside[new] = True
        frontier = new
    return Subgroup(G, mask_of(np.nonzero(inside)[0]))


def commutator_elements(G: FiniteGroup, A: Subgroup, B: Subgroup) -> np.ndarray:
    _same_parent(A, B)
    if A.parent is not G and A.parent != G:
        raise SubgroupError(f"subgroups do not live in {G.label}", kind="parent")
    return np.unique(G.commutator_table[np.ix_(list(A.members), list(B.members))])


def commutator_subgroup(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    """[A, B], generated by all a b a⁻¹ b⁻¹."""
    return generate_subgroup(G, commutator_elements(G, A, B).tolist())


def normal_closure(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    seed = _checked_indices(G, S)
    if not seed:
        return G.trivial
    conjugates = np.unique(G.conjugation_table[:, seed])
    return generate_subgroup(G, conjugates.tolist())


def center(G: FiniteGroup) -> Subgroup:
    central = np.all(G.commutator_table == G.identity, axis=1)
    return Subgroup(G, mask_of(np.nonzero(central)[0]))


def all_subgroups(G: FiniteGroup, budget: Budget = DEFAULT_BUDGET) -> List[Subgroup]:
    """Every subgroup, by joining cyclic subgroups until nothing new appears."""
    budget.require("subgroup lattice order", G.order, budget.max_group_order)
    cyclic = {generate_subgroup(G, [g]) for g in G.elements}
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        nxt = set()
        for H in frontier:
            for C in cyclic:
                if C.mask & ~H.mask:
                    J = generate_subgroup(G, H.members + C.members)
                    if J not in found:
                        found.add(J)
                        nxt.add(J)
        frontier = nxt
    return sorted(found, key=lambda H: (H.order, H.members))


def normal_subgroups(G: FiniteGroup, budget: Budget = DEFAULT_BUDGET) -> List[Subgroup]:
    return [H for H in all_subgroups(G, budget) if H.is_normal()]


# -----------------------------
# Homomorphisms
# -----------------------------


@dataclass(frozen=True, eq=False)
class Homomorphism:
    source: FiniteGroup
    target: FiniteGroup
    table: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.table)
        if arr.shape != (self.source.order,) or arr.dtype.kind not in "iu":
            raise HomomorphismError(
                f"map {self.source.label} → {self.target.label} must list one image per element", kind="malformed"
            )
        if np.any((arr < 0) | (arr >= self.target.order)):
            raise HomomorphismError("image index out of range", kind="malformed")
        arr = arr.astype(np.int64)
        lhs = arr[self.source.mul]
        rhs = self.target.mul[arr[:, None], arr[None, :]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            x, y = (int(v) for v in bad[0])
            raise HomomorphismError(
                f"map {self.source.label} → {self.target.label} is not multiplicative at "
                f"({self.source.names[x]}, {self.source.names[y]})",
                kind="homomorphism",
                witness=(x, y),
            )
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Homomorphism):
            return NotImplemented
        return self.source == other.source and self.target == other.target and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.key))

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def __repr__(self) -> str:
        return f"Homomorphism({self.source.label} → {self.target.label}, {list(self.key)})"

    @property
    def key(self) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.table)

    def image(self, H: Optional[Subgroup] = None) -> Subgroup:
        members = self.table if H is None else self.table[list(H.members)]
        return Subgroup(self.target, mask_of(np.unique(members)))

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, mask_of(np.nonzero(self.table == self.target.identity)[0]))

    def compose(self, first: "Homomorphism") -> "Homomorphism":
        """self ∘ first."""
        if first.target != self.source:
            raise HomomorphismError(f"cannot compose through {first.target.label} / {self.source.label}", kind="compose")
        return Homomorphism(first.source, self.target, self.table[first.table])

    def is_injective(self) -> bool:
        return len(np.unique(self.table)) == self.source.order

    def is_surjective(self) -> bool:
        return len(np.unique(self.table)) == self.target.order

    @classmethod
    def identity(cls, G: FiniteGroup) -> "Homomorphism":
        return cls(G, G, np.arange(G.order))

    @classmethod
    def trivial(cls, G: FiniteGroup, H: FiniteGroup) -> "Homomorphism":
        return cls(G, H, np.full(G.order, H.identity))


def _is_homomorphic(G: FiniteGroup, H: FiniteGroup, phi: np.ndarray) -> bool:
    return bool(np.array_equal(phi[G.mul], H.mul[phi[:, None], phi[None, :]]))


FULL_TABLE_SOURCE_LIMIT = 5
FULL_TABLE_CANDIDATE_LIMIT = 4096


def enumerate_homomorphisms(G: FiniteGroup, H: FiniteGroup, budget: Budget = DEFAULT_BUDGET) -> List[Homomorphism]:
    """All homomorphisms G → H, sorted lexicographically on their tables.

    Images are chosen for ``G.generators`` (restricted to elements of compatible order)
    and extended along the BFS spanning tree; tiny sources use the full table search.
    """
    budget.require("hom-set source order", G.order, budget.max_hom_order)
    budget.require("hom-set target order", H.order, max(budget.max_group_order, budget.max_carrier_order))
    if G.order <= FULL_TABLE_SOURCE_LIMIT and H.order ** G.order <= FULL_TABLE_CANDIDATE_LIMIT:
        return brute_force_homomorphisms(G, H, budget)

    h_orders = H.element_orders
    allowed = [np.nonzero(G.element_orders[g] % h_orders == 0)[0] for g in G.generators]
    total = math.prod(len(a) for a in allowed)
    budget.require("homomorphism candidates", total, budget.max_candidates)

    found: List[Tuple[int, ...]] = []
    phi = np.empty(G.order, dtype=np.int64)
    for images in itertools.product(*allowed):
        phi[G.identity] = H.identity
        for x, p, k in G.spanning_tree:
            phi[x] = H.mul[phi[p], images[k]]
        if _is_homomorphic(G, H, phi):
            found.append(tuple(int(v) for v in phi))
    found.sort()
    logger.debug("Hom(%s, %s): %d maps from %d candidates", G.label, H.label, len(found), total)
    return [Homomorphism(G, H, np.array(t, dtype=np.int64)) for t in found]


def brute_force_homomorphisms(G: FiniteGroup, H: FiniteGroup, budget: Budget = DEFAULT_BUDGET) -> List[Homomorphism]:
    """Filter of all |H|^|G| set maps; the reference oracle for ``enumerate_homomorphisms``."""
    total = H.order ** G.order
    budget.require("set maps for homomorphism filter", total, budget.max_candidates)
    found: List[Homomorphism] = []
    for images in itertools.product(range(H.order), repeat=G.order):
        phi = np.array(images, dtype=np.int64)
        if _is_homomorphic(G, H, phi):
            found.append(Homomorphism(G, H, phi))
    return found


def is_automorphism(G: FiniteGroup, f: Homomorphism) -> bool:
    if f.source != G or f.target != G:
        raise HomomorphismError(f"{f!r} is not an endomorphism of {G.label}", kind="endomorphism")
    return f.is_injective()


# -----------------------------
# Constructions
# -----------------------------


def direct_product(G: FiniteGroup, H: FiniteGroup, label: Optional[str] = None) -> FiniteGroup:
    m = H.order
    names = [f"({a},{b})" for a in G.names for b in H.names]
    ga, hb = np.divmod(np.arange(G.order * m), m)
    table = G.mul[ga[:, None], ga[None, :]] * m + H.mul[hb[:, None], hb[None, :]]
    return validate_group(table, names=names, identity=G.identity * m + H.identity, label=label or f"{G.label}x{H.label}")


def quotient_map(G: FiniteGroup, N: Subgroup, label: Optional[str] = None) -> Homomorphism:
    """The projection G → G/N; cosets are indexed by their smallest element."""
    if not N.is_normal():
        raise SubgroupError(f"{N.describe()} is not normal in {G.label}", kind="normality")
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps: List[int] = []
    for g in G.elements:
        if coset_of[g] < 0:
            coset_of[G.mul[g, list(N.members)]] = len(reps)
            reps.append(g)
    table = coset_of[G.mul[np.ix_(reps, reps)]]
    Q = validate_group(
        table,
        names=[f"[{G.names[r]}]" for r in reps],
        identity=int(coset_of[G.identity]),
        label=label or f"{G.label}/{N.order}",
    )
    return Homomorphism(G, Q, coset_of)


@dataclass(frozen=True, eq=False)
class FunctionGroup:
    """Set maps domain → codomain closed under the pointwise product.

    ``maps`` rows are sorted lexicographically; row k is the element with index k of ``group``.
    """

    group: FiniteGroup
    codomain: FiniteGroup
    maps: np.ndarray

    @property
    def domain_size(self) -> int:
        return self.maps.shape[1]

    def value(self, u: int, b: int) -> int:
        return int(self.maps[u, b])

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        return row_indices(self.maps, np.atleast_2d(rows))

    def index_of(self, row: Sequence[int]) -> Optional[int]:
        pos = int(self.lookup(np.array([row], dtype=np.int64))[0])
        return None if pos < 0 else pos


def pointwise_group(codomain: FiniteGroup, maps: np.ndarray, label: str = "Map") -> FunctionGroup:
    maps = np.unique(np.asarray(maps, dtype=np.int64).reshape(len(maps), -1), axis=0)
    k, d = maps.shape
    products = codomain.mul[maps[:, None, :], maps[None, :, :]].reshape(k * k, d)
    idx = row_indices(maps, products)
    if np.any(idx < 0):
        u, v = divmod(int(np.nonzero(idx < 0)[0][0]), k)
        raise SubgroupError(f"{label}: maps not closed under the pointwise product", kind="closure", witness=(u, v))
    unit = np.nonzero(np.all(maps == codomain.identity, axis=1))[0]
    if not unit.size:
        raise SubgroupError(f"{label}: constant identity map missing", kind="identity")
    names = ["[" + ",".join(codomain.names[v] for v in row) + "]" for row in maps]
    group = validate_group(idx.reshape(k, k), names=names, identity=int(unit[0]), label=label)
    maps.setflags(write=False)
    return FunctionGroup(group=group, codomain=codomain, maps=maps)
