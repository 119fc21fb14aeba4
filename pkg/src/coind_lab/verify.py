"""Verification suites: adjunction checks and seeded instance families drawn from the catalog."""

from __future__ import annotations

import itertools
import logging
import math
import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .action import (
    EquivariantMorphism,
    GroupAction,
    SCFAction,
    action_via_homomorphism,
    conjugation_action,
    enumerate_equivariant_morphisms,
    inversion_action,
    is_equivariant,
    preservation_violation,
    restrict_action,
    restrict_group_action,
    scf_action_violation,
    trivial_action,
    validate_group_action,
)
from .catalog import SMALL_GROUPS, get_group
from .coinduction import (
    CoinducedPoint,
    coinduce,
    coinduce_group,
    hom_sets,
    t_infinity,
    t_step,
    transpose_backward,
    transpose_forward,
    transversal_count,
)
from .config import DEFAULT_BUDGET, Budget
from .errors import (
    ActionValidationError,
    GroupValidationError,
    InternalConsistencyError,
    NotStronglyCentral,
)
from .filtration import (
    Filtration,
    constant_filtration,
    filtration_contains,
    is_strongly_central,
    lower_central_series,
    restrict_to_subgroup,
    stretched_lcs,
    validate_scf,
)
from .groups import (
    FiniteGroup,
    Homomorphism,
    Subgroup,
    all_subgroups,
    commutator_subgroup,
    enumerate_homomorphisms,
    generate_subgroup,
    validate_group,
)
from .oracles import oracle_is_strongly_central, oracle_lower_central_series, oracle_max_subfiltration
from .report import VerificationReport
from .top_coinduction import t_top_infinity
from .topology import (
    ContinuousAction,
    FiniteTopology,
    TopGroup,
    automorphism_continuity_violation,
    coset_topology,
    curry_check,
    discrete,
    group_topologies,
    indiscrete,
    is_continuous,
    joint_continuity_violation,
    topology_from_nb,
)

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 3


# -----------------------------
# Adjunction checkers
# -----------------------------


def _key(m: EquivariantMorphism) -> List[int]:
    return list(m.key)


def _adjunction_checks(
    report: VerificationReport,
    instance: str,
    X: SCFAction,
    coinduced: CoinducedPoint,
    budget: Budget,
    rng: np.random.Generator,
    samples: int,
) -> None:
    left, right = hom_sets(X, coinduced, budget)
    report.add(
        instance,
        "cardinality",
        len(left) == len(right),
        left=len(left),
        right=len(right),
        **coinduced.record(),
    )
    try:
        forward = {f.key: transpose_forward(f, X, coinduced) for f in left}
        images = {g.key for g in forward.values()}
        right_keys = {g.key for g in right}
        missing = sorted(right_keys - images)
        report.add(
            instance,
            "forward-bijective",
            images == right_keys and len(images) == len(left),
            witness=list(missing[0]) if missing else None,
        )

        bad = next((f.key for f in left if transpose_backward(forward[f.key], X, coinduced).key != f.key), None)
        report.add(instance, "round-trip-left", bad is None, witness=None if bad is None else list(bad))
        bad = next(
            (
                g.key
                for g in right
                if transpose_forward(transpose_backward(g, X, coinduced), X, coinduced).key != g.key
            ),
            None,
        )
        report.add(instance, "round-trip-right", bad is None, witness=None if bad is None else list(bad))

        endos = enumerate_equivariant_morphisms(X.base, X.base, X.target_f, X.target_f, budget)
        picks = [int(k) for k in rng.permutation(len(endos))[:samples]]
        pulled = restrict_group_action(coinduced.alpha, X.base)
        witness = None
        for k in picks:
            h = endos[k]
            for f in left:
                fh = EquivariantMorphism(f.underlying.compose(h.underlying), pulled, coinduced.source.base)
                lhs = transpose_forward(fh, X, coinduced).underlying
                rhs = forward[f.key].underlying.compose(h.underlying)
                if lhs != rhs:
                    witness = [_key(h), _key(f)]
                    break
            if witness is not None:
                break
        report.add(instance, "naturality", witness is None, witness=witness, samples=len(picks))
    except InternalConsistencyError as e:
        report.add(instance, "internal-consistency", False, error=str(e))


def verify_scf_adjunction(
    alpha: Homomorphism,
    X: SCFAction,
    Y: SCFAction,
    budget: Budget = DEFAULT_BUDGET,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    instance: str = "adjunction",
    report: Optional[VerificationReport] = None,
) -> VerificationReport:
    """Hom(α*X_*, Y_*) against Hom(X_*, α_!Y_*) through the explicit transposes."""
    report = report or VerificationReport(suite="scf-adjunction", seed=seed)
    coinduced = coinduce(alpha, X.actor_f, Y, budget)
    _adjunction_checks(report, instance, X, coinduced, budget, np.random.default_rng(seed), samples)
    return report


def verify_group_coinduction(
    alpha: Homomorphism,
    X_action: GroupAction,
    Y_action: GroupAction,
    budget: Budget = DEFAULT_BUDGET,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    instance: str = "group-coinduction",
    report: Optional[VerificationReport] = None,
) -> VerificationReport:
    """Plain-group version: every filtration constant."""
    report = report or VerificationReport(suite="group-coinduction", seed=seed)
    coinduced = coinduce_group(alpha, Y_action, budget)
    B = alpha.target
    X = SCFAction(
        base=X_action,
        actor_f=constant_filtration(B.full),
        target_f=constant_filtration(X_action.target.full),
        certified=True,
    )
    _adjunction_checks(report, instance, X, coinduced, budget, np.random.default_rng(seed), samples)
    return report


def _continuous_equivariant_homs(
    X: ContinuousAction, target: TopGroup, action: GroupAction, budget: Budget
) -> List[Homomorphism]:
    out = []
    for f in enumerate_homomorphisms(X.target.group, target.group, budget):
        if is_equivariant(f, X.action, action) and is_continuous(f.table, X.target.topology, target.topology):
            out.append(f)
    return out


def verify_top_adjunction(
    B: TopGroup,
    G: TopGroup,
    a: GroupAction,
    instances: Optional[Sequence[Tuple[str, ContinuousAction]]] = None,
    budget: Budget = DEFAULT_BUDGET,
    instance: str = "top",
    report: Optional[VerificationReport] = None,
) -> VerificationReport:
    """Continuous equivariant X → G against continuous equivariant X → (G_∞, τ_∞)."""
    report = report or VerificationReport(suite="top-adjunction")
    try:
        tower = t_top_infinity(B, G, a, budget)
    except InternalConsistencyError as e:
        report.add(instance, "tower", False, error=str(e))
        return report
    limit = tower.limit
    report.add(
        instance,
        "tower",
        True,
        levels=len(tower.levels),
        iterations=tower.iterations,
        limit_order=limit.target.order,
    )
    report.add(instance, "joint-continuity", limit.jointly_continuous)

    if instances is None:
        instances = default_top_instances(B, G, a, limit, budget)
    inclusion = tower.last.inclusion
    for name, X in instances:
        tag = f"{instance}/{name}"
        left = _continuous_equivariant_homs(X, G, a, budget)
        right = _continuous_equivariant_homs(X, limit.target, limit.action, budget)
        composed = {inclusion.compose(h).key for h in right}
        left_keys = {f.key for f in left}
        stray = sorted(left_keys - composed)
        report.add(
            tag,
            "factorization",
            composed == left_keys and len(composed) == len(right),
            witness=list(stray[0]) if stray else None,
            left=len(left),
            right=len(right),
        )
    return report


def default_top_instances(
    B: TopGroup, G: TopGroup, a: GroupAction, limit: ContinuousAction, budget: Budget = DEFAULT_BUDGET
) -> List[Tuple[str, ContinuousAction]]:
    """Trivial B-actions on groups of order <= 4 under every group topology, plus G and the limit."""
    out: List[Tuple[str, ContinuousAction]] = []
    for name in ("1", "Z2", "Z3", "Z4", "V4"):
        H = get_group(name)
        for k, tau in enumerate(group_topologies(H, budget)):
            X = TopGroup(H, tau)
            out.append((f"{name}#{k}", ContinuousAction(B, X, trivial_action(B.group, H), True)))
    if joint_continuity_violation(B, G, a) is None:
        out.append(("self", ContinuousAction(B, G, a, True)))
    out.append(("limit", limit))
    return out


# -----------------------------
# Instance generation
# -----------------------------


def _pick(rng: np.random.Generator, items: Sequence):
    return items[int(rng.integers(len(items)))]


def _sample(rng: np.random.Generator, items: Sequence, k: int) -> List:
    """k items without replacement, in their original order."""
    return [items[int(i)] for i in sorted(rng.permutation(len(items))[:k])]


def _names_up_to(order: int, minimum: int = 1) -> List[str]:
    return [n for n in SMALL_GROUPS if minimum <= get_group(n).order <= order]


def random_chain(G: FiniteGroup, rng: np.random.Generator, max_length: int, budget: Budget) -> Filtration:
    """Descending chain of random subgroups starting at G."""
    subgroups = all_subgroups(G, budget)
    levels = [G.full]
    for _ in range(int(rng.integers(1, max_length))):
        inside = [H for H in subgroups if H.issubset(levels[-1])]
        levels.append(_pick(rng, inside))
    return Filtration(G, tuple(levels))


def random_filtration(
    G: FiniteGroup, rng: np.random.Generator, max_length: int, budget: Budget, allow_chains: bool = True
) -> Optional[Filtration]:
    kinds = ["lcs", "const", "stretch", "shift"]
    if allow_chains and G.is_abelian:
        kinds += ["chain", "chain"]
    kind = _pick(rng, kinds)
    if kind == "lcs":
        F = lower_central_series(G)
    elif kind == "const":
        F = constant_filtration(G.full)
    elif kind == "stretch":
        F = stretched_lcs(G, step=2)
    elif kind == "shift":
        F = stretched_lcs(G, step=1, shift=1)
    else:
        F = random_chain(G, rng, max_length, budget)
    if F.length > max_length or not is_strongly_central(F):
        return None
    return F


_HOM_CACHE: Dict[Tuple[str, str], List[Homomorphism]] = {}


def _homs(B_name: str, G_name: str, budget: Budget) -> List[Homomorphism]:
    key = (B_name, G_name)
    if key not in _HOM_CACHE:
        _HOM_CACHE[key] = enumerate_homomorphisms(get_group(B_name), get_group(G_name), budget)
    return _HOM_CACHE[key]


def random_action(
    rng: np.random.Generator, max_group: int, max_actor: int, budget: Budget
) -> Tuple[str, str, GroupAction]:
    G_name = _pick(rng, _names_up_to(max_group))
    G = get_group(G_name)
    if G.is_abelian and G.order > 2 and rng.random() < 0.35:
        return "Z2", G_name, inversion_action(G)
    B_name = _pick(rng, _names_up_to(max_actor, minimum=2))
    homs = _homs(B_name, G_name, budget)
    nontrivial = [h for h in homs if h.image().order > 1]
    phi = _pick(rng, nontrivial or homs)
    return B_name, G_name, action_via_homomorphism(phi)


TransportInstance = Tuple[str, Filtration, Filtration, GroupAction]


def _instance_key(B_f: Filtration, G_f: Filtration, a: GroupAction) -> str:
    return repr((a.actor.label, a.target.label, B_f.as_lists(), G_f.as_lists(), a.table.tolist()))


def stressed_instance(
    rng: np.random.Generator, max_group: int, max_actor: int, max_length: int, budget: Budget
) -> Tuple[str, str, Filtration, Filtration, GroupAction]:
    """Inversion on a random abelian chain, or conjugation against a constant actor filtration."""
    nonabelian = [n for n in _names_up_to(min(max_group, max_actor), minimum=6) if not get_group(n).is_abelian]
    if not nonabelian or rng.random() < 0.6:
        G_name = _pick(rng, [n for n in _names_up_to(max_group, minimum=3) if get_group(n).is_abelian])
        G = get_group(G_name)
        Z2 = get_group("Z2")
        return "Z2", G_name, constant_filtration(Z2.full), random_chain(G, rng, max_length, budget), inversion_action(G)
    G_name = _pick(rng, nonabelian)
    G = get_group(G_name)
    G_f = stretched_lcs(G, step=2) if rng.random() < 0.5 else lower_central_series(G)
    if G_f.length > max_length:
        G_f = lower_central_series(G)
    return G_name, G_name, constant_filtration(G.full), G_f, conjugation_action(G)


def transport_instances(
    rng: np.random.Generator,
    count: int,
    max_group: int,
    max_actor: int,
    max_length: int,
    budget: Budget,
    exclude: Sequence[TransportInstance] = (),
) -> List[TransportInstance]:
    """Distinct level-preserving instances; at most a third of them already certified."""
    out: List[TransportInstance] = []
    seen = {_instance_key(B_f, G_f, a) for _, B_f, G_f, a in exclude}
    certified = 0
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise InternalConsistencyError(f"only {len(out)} of {count} transport instances could be generated")
        if rng.random() < 0.5:
            B_name, G_name, B_f, G_f, a = stressed_instance(rng, max_group, max_actor, max_length, budget)
        else:
            B_name, G_name, a = random_action(rng, max_group, max_actor, budget)
            B_f = random_filtration(a.actor, rng, max_length, budget, allow_chains=False)
            G_f = random_filtration(a.target, rng, max_length, budget)
            if B_f is None or G_f is None:
                continue
        if preservation_violation(a, G_f, actors=B_f.top) is not None:
            continue
        key = _instance_key(B_f, G_f, a)
        if key in seen:
            continue
        already = scf_action_violation(a, B_f, G_f) is None
        # the cap on certified instances lifts after 100 attempts per instance
        if already and certified >= count // 3 and attempts <= 100 * count:
            continue
        seen.add(key)
        certified += already
        out.append((f"{len(out):03d}:{B_name}{list(B_f.orders)}->{G_name}{list(G_f.orders)}", B_f, G_f, a))
    return out


# -----------------------------
# Suites
# -----------------------------


def suite_transport(seed: int = 0, budget: Budget = DEFAULT_BUDGET, count: Optional[int] = None) -> VerificationReport:
    """One transport step on random level-preserving actions: strongly central, stable, contained."""
    report = VerificationReport(suite="transport", seed=seed)
    rng = np.random.default_rng(seed)
    for name, B_f, G_f, a in transport_instances(rng, count or 100, 16, 8, 4, budget):
        try:
            t = t_step(B_f, G_f, a)
        except InternalConsistencyError as e:
            report.add(name, "t-step", False, error=str(e))
            continue
        report.add(name, "strongly-central", oracle_is_strongly_central(t), orders=list(t.orders))
        pres = preservation_violation(a, t, actors=B_f.top)
        report.add(name, "stable", pres is None, witness=None if pres is None else pres.witness)
        report.add(name, "contained", filtration_contains(G_f, t), moved=t != G_f)
    return report


def maximality_instances(rng: np.random.Generator, count: int, budget: Budget) -> List[TransportInstance]:
    Z2, Z4 = get_group("Z2"), get_group("Z4")
    neg = inversion_action(Z4)
    fixed = (
        "Z2[1]->Z4[4, 2, 1]",
        constant_filtration(Z2.full),
        Filtration.from_members(Z4, [[0, 1, 2, 3], [0, 2], [0]]),
        neg,
    )
    return [fixed] + transport_instances(rng, count - 1, 8, 8, 3, budget, exclude=[fixed])


def suite_maximality(seed: int = 0, budget: Budget = DEFAULT_BUDGET, count: Optional[int] = None) -> VerificationReport:
    """The transport limit equals the exhaustive maximal sub-filtration."""
    report = VerificationReport(suite="maximality", seed=seed)
    rng = np.random.default_rng(seed)
    for name, B_f, G_f, a in maximality_instances(rng, count or 30, budget):
        try:
            tower = t_infinity(B_f, G_f, a, budget)
        except InternalConsistencyError as e:
            report.add(name, "t-infinity", False, error=str(e))
            continue
        oracle = oracle_max_subfiltration(B_f, G_f, a, budget=budget)
        report.add(
            name,
            "maximal",
            tower.limit == oracle,
            witness=None if tower.limit == oracle else [tower.limit.as_lists(), oracle.as_lists()],
            limit=list(tower.limit.orders),
            levels=len(tower.levels),
            moved=tower.limit != G_f,
        )
        report.add(name, "fixed-point", t_step(B_f, tower.limit, a) == tower.limit)
    return report


def _alphas(B_name: str, budget: Budget) -> List[Tuple[str, Homomorphism]]:
    """Identity, trivial maps from Z2 and Z3, and inclusions of cyclic subgroups."""
    B = get_group(B_name)
    out: List[Tuple[str, Homomorphism]] = [("id", Homomorphism.identity(B))]
    for E_name in ("Z2", "Z3"):
        out.append((f"triv{E_name}", Homomorphism.trivial(get_group(E_name), B)))
    seen = set()
    for g in B.elements:
        H = generate_subgroup(B, [g])
        if 1 < H.order < B.order and H.mask not in seen:
            seen.add(H.mask)
            _, inclusion = H.as_group(label=f"<{B.names[g]}>")
            out.append((f"incl<{B.names[g]}>", inclusion))
    return out


def _small_actions(G: FiniteGroup) -> List[Tuple[str, GroupAction]]:
    """Actions of G on small groups: on itself by conjugation, trivially on Z2 and Z3."""
    out = [("conj", conjugation_action(G))]
    for name in ("Z2", "Z3"):
        out.append((f"triv{name}", trivial_action(G, get_group(name))))
    return out


def group_coinduction_instances(
    rng: np.random.Generator, count: int, budget: Budget, carrier_cap: int = 32
) -> List[Tuple[str, Homomorphism, GroupAction, GroupAction]]:
    candidates = []
    for B_name in ("Z2", "Z3", "Z4", "V4", "S3", "D4", "Q8"):
        B = get_group(B_name)
        for a_name, alpha in _alphas(B_name, budget):
            for x_name, X in _small_actions(B):
                if len(X.target.generators) > 2:
                    continue
                for y_name, Y in _small_actions(alpha.source):
                    if transversal_count(alpha, Y) > carrier_cap:
                        continue
                    candidates.append((f"{B_name}/{a_name}/X={x_name}/Y={y_name}", alpha, X, Y))
    order = rng.permutation(len(candidates))[:count]
    return [candidates[int(k)] for k in sorted(order)]


def suite_group_coinduction(
    seed: int = 0, budget: Budget = DEFAULT_BUDGET, count: Optional[int] = None
) -> VerificationReport:
    report = VerificationReport(suite="group-coinduction", seed=seed)
    rng = np.random.default_rng(seed)
    for name, alpha, X, Y in group_coinduction_instances(rng, count or 20, budget):
        verify_group_coinduction(alpha, X, Y, budget, seed=seed, instance=name, report=report)
    return report


def _points(G: FiniteGroup, actor_f: Filtration) -> List[Tuple[str, SCFAction]]:
    """Certified G_*-points among conjugation on lcs(G) and trivial actions on Z2, Z3."""
    out = []
    options = [("conj", conjugation_action(G), lower_central_series(G))]
    for name in ("Z2", "Z3"):
        Z = get_group(name)
        options.append((f"triv{name}", trivial_action(G, Z), constant_filtration(Z.full)))
        options.append((f"triv{name}-split", trivial_action(G, Z), Filtration(Z, (Z.full, Z.trivial))))
    for name, a, F in options:
        if scf_action_violation(a, actor_f, F) is None:
            out.append((name, SCFAction(a, actor_f, F, certified=True)))
    return out


def scf_adjunction_instances(
    rng: np.random.Generator, count: int, budget: Budget, carrier_cap: int = 64
) -> List[Tuple[str, Homomorphism, SCFAction, SCFAction]]:
    by_kind: Dict[str, List] = {"id": [], "triv": [], "incl": []}
    for B_name in ("Z2", "Z4", "V4", "S3", "D4", "Q8"):
        B = get_group(B_name)
        for f_name, B_f in (("lcs", lower_central_series(B)), ("const", constant_filtration(B.full))):
            X_points = [(n, X) for n, X in _points(B, B_f) if len(X.target.generators) <= 2]
            for a_name, alpha in _alphas(B_name, budget):
                E = alpha.source
                E_f = B_f if a_name == "id" else (
                    constant_filtration(E.full) if a_name.startswith("triv") else restrict_to_subgroup(B_f, alpha)
                )
                Y_points = _points(E, E_f)
                for x_name, X in X_points:
                    Y_points_here = Y_points + [("pullback", restrict_action(alpha, E_f, X))]
                    for y_name, Y in Y_points_here:
                        if transversal_count(alpha, Y.base) > carrier_cap:
                            continue
                        kind = "id" if a_name == "id" else "triv" if a_name.startswith("triv") else "incl"
                        name = f"{B_name}{list(B_f.orders)}/{a_name}/X={x_name}/Y={y_name}"
                        by_kind[kind].append((name, alpha, X, Y))
    per_kind = math.ceil(count / len(by_kind))
    out = []
    for kind in ("id", "triv", "incl"):
        out.extend(_richer_first(rng, by_kind[kind], per_kind, budget))
    return out


def _left_hom_count(alpha: Homomorphism, X: SCFAction, Y: SCFAction, budget: Budget) -> int:
    pulled = restrict_group_action(alpha, X.base)
    return len(enumerate_equivariant_morphisms(pulled, Y.base, X.target_f, Y.target_f, budget))


def _richer_first(rng: np.random.Generator, items: Sequence, k: int, budget: Budget) -> List:
    """Walk ``items`` in seeded order; instances with more than one morphism on the left come first."""
    rich, poor = [], []
    for idx in rng.permutation(len(items)):
        if len(rich) >= k:
            break
        item = items[int(idx)]
        _, alpha, X, Y = item
        (rich if _left_hom_count(alpha, X, Y, budget) > 1 else poor).append(item)
    return rich + poor[: k - len(rich)]


def suite_scf_adjunction(seed: int = 0, budget: Budget = DEFAULT_BUDGET, count: Optional[int] = None) -> VerificationReport:
    report = VerificationReport(suite="scf-adjunction", seed=seed)
    for name, alpha, X, Y in scf_adjunction_instances(np.random.default_rng(seed), count or 27, budget):
        verify_scf_adjunction(alpha, X, Y, budget, seed=seed, instance=name, report=report)
    return report


def small_spaces() -> List[Tuple[str, FiniteTopology]]:
    sierpinski = topology_from_nb([[True, True], [False, True]])
    return [
        ("pt", discrete(1)),
        ("d2", discrete(2)),
        ("i2", indiscrete(2)),
        ("sier", sierpinski),
        ("d3", discrete(3)),
        ("i3", indiscrete(3)),
        ("Z4/2", coset_topology(get_group("Z4"), Subgroup.from_members(get_group("Z4"), [0, 2]))),
        ("d4", discrete(4)),
    ]


def currying_instances(
    rng: np.random.Generator, count: int, budget: Budget
) -> List[Tuple[str, FiniteTopology, FiniteTopology, FiniteTopology]]:
    spaces = small_spaces()
    candidates = []
    for (bn, B), (xn, X), (yn, Y) in itertools.product(spaces, repeat=3):
        if Y.size ** (B.size * X.size) > min(budget.max_set_maps, 4096):
            continue
        if (Y.size ** B.size) ** X.size > min(budget.max_set_maps, 4096):
            continue
        candidates.append((f"B={bn}/X={xn}/Y={yn}", B, X, Y))
    order = rng.permutation(len(candidates))[:count]
    return [candidates[int(k)] for k in sorted(order)]


def suite_currying(seed: int = 0, budget: Budget = DEFAULT_BUDGET, count: Optional[int] = None) -> VerificationReport:
    report = VerificationReport(suite="currying", seed=seed)
    for name, B, X, Y in currying_instances(np.random.default_rng(seed), count or 20, budget):
        res = curry_check(B, X, Y, budget)
        report.add(
            name,
            "currying",
            res.bijective and res.left_count == res.right_count,
            witness=list(res.witness) or None,
            left=res.left_count,
            right=res.right_count,
        )
    return report


def top_instances(
    rng: np.random.Generator, count: int, budget: Budget
) -> List[Tuple[str, TopGroup, TopGroup, GroupAction]]:
    candidates = []
    for B_name in ("Z2", "Z3"):
        Bg = get_group(B_name)
        for bk, btau in enumerate(group_topologies(Bg, budget)):
            B = TopGroup(Bg, btau)
            for G_name in ("Z2", "Z3", "Z4", "V4", "Z6", "S3"):
                G = get_group(G_name)
                actions = [("triv", trivial_action(Bg, G))]
                if B_name == "Z2" and G.is_abelian:
                    actions.append(("inv", inversion_action(G)))
                for h in enumerate_homomorphisms(Bg, G, budget):
                    if h.image().order > 1 and not G.is_abelian:
                        actions.append((f"conj{list(h.key)}", action_via_homomorphism(h)))
                for gk, gtau in enumerate(group_topologies(G, budget)):
                    Gt = TopGroup(G, gtau)
                    for a_name, a in actions:
                        if automorphism_continuity_violation(Gt, a) is None:
                            candidates.append((f"{B_name}#{bk}/{G_name}#{gk}/{a_name}", B, Gt, a))
    moves = [len(t_top_infinity(B, G, a, budget).levels) > 1 for _, B, G, a in candidates]
    moving = [c for c, m in zip(candidates, moves) if m]
    still = [c for c, m in zip(candidates, moves) if not m]
    picks = _sample(rng, moving, min(len(moving), count // 2))
    rest = count - len(picks)
    nondiscrete = [c for c in still if not c[1].topology.is_discrete()]
    discrete_b = [c for c in still if c[1].topology.is_discrete()]
    picks += _sample(rng, nondiscrete, rest // 2)
    picks += _sample(rng, discrete_b, count - len(picks))
    return picks


def suite_top_adjunction(seed: int = 0, budget: Budget = DEFAULT_BUDGET, count: Optional[int] = None) -> VerificationReport:
    report = VerificationReport(suite="top-adjunction", seed=seed)
    for name, B, G, a in top_instances(np.random.default_rng(seed), count or 16, budget):
        verify_top_adjunction(B, G, a, budget=budget, instance=name, report=report)
    return report


def suite_regressions(seed: int = 0, budget: Budget = DEFAULT_BUDGET, count: Optional[int] = None) -> VerificationReport:
    """Fixed values: lower central series orders and the worked examples."""
    report = VerificationReport(suite="regressions", seed=seed)
    for name, expected in (("D4", (8, 2, 1)), ("Q8", (8, 2, 1)), ("S3", (6, 3))):
        G = get_group(name)
        lcs = lower_central_series(G)
        oracle = [Subgroup.from_members(G, sorted(t)) for t in oracle_lower_central_series(G)]
        report.add(
            f"lcs/{name}",
            "orders",
            lcs.orders == expected and list(lcs.levels) == oracle,
            orders=list(lcs.orders),
            expected=list(expected),
        )

    S3 = get_group("S3")
    A3 = generate_subgroup(S3, [S3.index("(123)")])
    derived = commutator_subgroup(S3, S3.full, S3.full)
    try:
        validate_scf(Filtration(S3, (S3.full, S3.full, S3.trivial)))
        report.add("scf/S3", "violation", False)
    except NotStronglyCentral as e:
        report.add("scf/S3", "violation", (e.i, e.j) == (1, 2), i=e.i, j=e.j)
    report.add("scf/S3", "commutator", derived == A3, orders=[derived.order])

    Z2, Z4 = get_group("Z2"), get_group("Z4")
    shift = [[(g + 1) % 4 if b else g for g in range(4)] for b in range(2)]
    try:
        validate_group_action(shift, Z2, Z4)
        report.add("action/shift", "rejected", False)
    except ActionValidationError as e:
        report.add("action/shift", "rejected", e.kind == "automorphism", kind=e.kind)

    neg = inversion_action(Z4)
    B_f = constant_filtration(Z2.full)
    G_f = Filtration.from_members(Z4, [[0, 1, 2, 3], [0, 2], [0]])
    violation = scf_action_violation(neg, B_f, G_f)
    report.add("action/negation", "violation", violation is not None and (violation.i, violation.j) == (2, 1))
    tower = t_infinity(B_f, G_f, neg, budget)
    report.add("transport/negation", "limit", tower.limit.orders == (2, 2, 1), orders=list(tower.limit.orders))

    broken = [list(row) for row in Z4.mul]
    broken[1][2], broken[1][3] = broken[1][3], broken[1][2]
    try:
        validate_group(broken, label="Z4-broken")
        report.add("group/broken-Z4", "rejected", False)
    except GroupValidationError as e:
        report.add("group/broken-Z4", "rejected", e.kind == "associativity", witness=e.witness)
    return report


SuiteFn = Callable[[int, Budget, Optional[int]], VerificationReport]

SUITES: Dict[str, SuiteFn] = {
    "transport": suite_transport,
    "maximality": suite_maximality,
    "group-coinduction": suite_group_coinduction,
    "scf-adjunction": suite_scf_adjunction,
    "currying": suite_currying,
    "top-adjunction": suite_top_adjunction,
    "regressions": suite_regressions,
}


def run_suite(name: str, seed: int = 0, budget: Budget = DEFAULT_BUDGET, count: Optional[int] = None) -> VerificationReport:
    if name not in SUITES:
        raise KeyError(f"Unknown suite '{name}'; choose from {sorted(SUITES)}")
    started = time.perf_counter()
    report = SUITES[name](seed, budget, count)
    report.elapsed = time.perf_counter() - started
    logger.info(
        "suite %s (seed %d): %d checks, %d failed, %.2fs",
        name,
        seed,
        len(report.checks),
        len(report.failures),
        report.elapsed,
    )
    return report
