"""Small named groups used by the bundled examples and the seeded suites."""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Dict, List, Tuple

from .groups import FiniteGroup, direct_product, group_from_function

_NAME = re.compile(r"^(?P<family>Z|D|S|A|V|Q)(?P<n>\d+)$")


def trivial_group() -> FiniteGroup:
    return group_from_function([0], lambda a, b: 0, names=["1"], label="1")


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError(f"cyclic group needs n >= 1, got {n}")
    return group_from_function(list(range(n)), lambda a, b: (a + b) % n, label=f"Z{n}")


def klein_four() -> FiniteGroup:
    elements = [(0, 0), (1, 0), (0, 1), (1, 1)]
    return group_from_function(
        elements,
        lambda a, b: ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2),
        names=["1", "a", "b", "ab"],
        label="V4",
    )


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; elements s^a r^k listed rotations first."""
    if n < 1:
        raise ValueError(f"dihedral group needs n >= 1, got {n}")
    elements = [(a, k) for a in (0, 1) for k in range(n)]

    def mul(x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
        # s^a r^k · s^b r^m = s^(a+b) r^((-1)^b k + m)
        a, k = x
        b, m = y
        return ((a + b) % 2, ((-k if b else k) + m) % n)

    def name(x: Tuple[int, int]) -> str:
        a, k = x
        rot = "" if k == 0 else ("r" if k == 1 else f"r{k}")
        if a == 0:
            return rot or "1"
        return "s" + rot

    return group_from_function(elements, mul, names=[name(x) for x in elements], label=f"D{n}")


_QUATERNION_UNITS = ["1", "i", "j", "k"]


def _hamilton(p: Tuple[int, ...], q: Tuple[int, ...]) -> Tuple[int, ...]:
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def quaternion() -> FiniteGroup:
    elements: List[Tuple[int, ...]] = []
    names: List[str] = []
    for pos, unit in enumerate(_QUATERNION_UNITS):
        for sign in (1, -1):
            vec = [0, 0, 0, 0]
            vec[pos] = sign
            elements.append(tuple(vec))
            names.append(unit if sign == 1 else f"-{unit}")
    return group_from_function(elements, _hamilton, names=names, label="Q8")


def _cycle_name(p: Tuple[int, ...]) -> str:
    seen = set()
    cycles: List[str] = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = p[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = p[x]
        cycles.append("(" + "".join(str(v + 1) for v in cyc) + ")")
    return "".join(cycles) or "1"


def _is_even(p: Tuple[int, ...]) -> bool:
    inversions = sum(1 for a, b in itertools.combinations(range(len(p)), 2) if p[a] > p[b])
    return inversions % 2 == 0


def symmetric(n: int) -> FiniteGroup:
    """Permutations of 1..n composed right to left: (pq)(x) = p(q(x))."""
    if not 1 <= n <= 4:
        raise ValueError(f"symmetric groups are catalogued for 1 <= n <= 4, got {n}")
    perms = list(itertools.permutations(range(n)))
    return group_from_function(
        perms,
        lambda p, q: tuple(p[q[x]] for x in range(n)),
        names=[_cycle_name(p) for p in perms],
        label=f"S{n}",
    )


def alternating(n: int) -> FiniteGroup:
    if not 1 <= n <= 4:
        raise ValueError(f"alternating groups are catalogued for 1 <= n <= 4, got {n}")
    perms = [p for p in itertools.permutations(range(n)) if _is_even(p)]
    return group_from_function(
        perms,
        lambda p, q: tuple(p[q[x]] for x in range(n)),
        names=[_cycle_name(p) for p in perms],
        label=f"A{n}",
    )


@lru_cache(maxsize=None)
def get_group(name: str) -> FiniteGroup:
    """Look up a catalogued group: "1", "Z4", "V4", "D4", "Q8", "S3", "A4", or products like "Z2xZ2"."""
    name = name.strip()
    if name in ("1", "trivial"):
        return trivial_group()
    if "x" in name:
        factors = name.split("x")
        group = get_group(factors[0])
        for factor in factors[1:]:
            group = direct_product(group, get_group(factor), label=f"{group.label}x{factor}")
        return group
    m = _NAME.match(name)
    if not m:
        raise KeyError(f"Unknown catalog group '{name}'")
    family, n = m.group("family"), int(m.group("n"))
    if family == "Z":
        return cyclic(n)
    if family == "D":
        return dihedral(n)
    if family == "S":
        return symmetric(n)
    if family == "A":
        return alternating(n)
    if family == "V" and n == 4:
        return klein_four()
    if family == "Q" and n == 8:
        return quaternion()
    raise KeyError(f"Unknown catalog group '{name}'")


# Catalog entries of order <= 16, smallest first; the seeded suites draw from these.
SMALL_GROUPS: Tuple[str, ...] = (
    "1", "Z2", "Z3", "Z4", "V4", "Z5", "Z6", "S3", "Z7", "Z8", "Z2xZ4", "Z2xZ2xZ2", "D4", "Q8",
    "Z9", "D5", "Z10", "A4", "Z12", "D6", "Z2xS3", "D8", "Z2xD4", "Z2xQ8", "Z4xZ4", "Z16",
)


def groups_up_to(order: int) -> Dict[str, FiniteGroup]:
    out: Dict[str, FiniteGroup] = {}
    for name in SMALL_GROUPS:
        group = get_group(name)
        if group.order <= order:
            out[name] = group
    return out
