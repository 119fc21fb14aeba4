from __future__ import annotations

import numpy as np
import pytest

from coind_lab.action import (
    conjugation_action,
    enumerate_equivariant_morphisms,
    inversion_action,
    is_equivariant,
    restrict_group_action,
    scf_action_violation,
    trivial_action,
    validate_scf_action,
)
from coind_lab.catalog import cyclic, get_group
from coind_lab.coinduction import t_step
from coind_lab.config import DEFAULT_BUDGET
from coind_lab.filtration import lower_central_series
from coind_lab.groups import Homomorphism, enumerate_homomorphisms
from coind_lab.report import render_machine
from coind_lab.top_coinduction import t_top_infinity
from coind_lab.topology import ContinuousAction, discrete, indiscrete, validate_topgroup
from coind_lab.verify import (
    SUITES,
    currying_instances,
    maximality_instances,
    run_suite,
    scf_adjunction_instances,
    top_instances,
    transport_instances,
    verify_group_coinduction,
    verify_scf_adjunction,
    verify_top_adjunction,
)


@pytest.mark.parametrize(
    "name,count",
    [
        ("regressions", None),
        ("transport", 12),
        ("maximality", 4),
        ("group-coinduction", 3),
        ("scf-adjunction", 3),
        ("currying", 6),
        ("top-adjunction", 4),
    ],
)
def test_suites_pass(name, count):
    report = run_suite(name, seed=1, count=count)
    assert report.checks
    assert report.passed, report.failures[:3]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")
    assert "regressions" in SUITES


def test_machine_output_is_deterministic_per_seed():
    first = render_machine(run_suite("transport", seed=5, count=6))
    second = render_machine(run_suite("transport", seed=5, count=6))
    assert first == second


def test_instance_generators_are_seeded():
    a = [name for name, *_ in transport_instances(np.random.default_rng(2), 5, 16, 8, 4, DEFAULT_BUDGET)]
    b = [name for name, *_ in transport_instances(np.random.default_rng(2), 5, 16, 8, 4, DEFAULT_BUDGET)]
    assert a == b and len(a) == 5
    spaces = currying_instances(np.random.default_rng(0), 7, DEFAULT_BUDGET)
    assert len(spaces) == 7


def test_scf_adjunction_along_identity():
    D4 = get_group("D4")
    lcs = lower_central_series(D4)
    P = validate_scf_action(conjugation_action(D4), lcs, lcs)
    report = verify_scf_adjunction(Homomorphism.identity(D4), P, P, instance="id/P/P")
    assert report.passed
    checks = {c.check: c for c in report.checks}
    assert set(checks) == {"cardinality", "forward-bijective", "round-trip-left", "round-trip-right", "naturality"}
    assert checks["cardinality"].detail["carrier_order"] == 8


def test_group_coinduction_from_trivial_group():
    Z2 = cyclic(2)
    alpha = Homomorphism.trivial(get_group("1"), Z2)
    report = verify_group_coinduction(alpha, trivial_action(Z2, cyclic(3)), trivial_action(get_group("1"), cyclic(3)))
    assert report.passed
    cardinality = next(c for c in report.checks if c.check == "cardinality")
    # Hom(Z3, Z3) on both sides
    assert cardinality.detail["left"] == cardinality.detail["right"] == 3


def test_top_adjunction_for_inversion():
    Bi = validate_topgroup(cyclic(2), indiscrete(2))
    Z4d = validate_topgroup(cyclic(4), discrete(4))
    report = verify_top_adjunction(Bi, Z4d, inversion_action(cyclic(4)), instance="Bi/Z4d")
    assert report.passed
    tower = next(c for c in report.checks if c.check == "tower")
    assert tower.detail["limit_order"] == 2
    assert tower.detail["levels"] == 2
    assert not any(c.instance.endswith("/self") for c in report.checks)


def test_transport_instances_are_distinct_and_mostly_uncertified():
    instances = transport_instances(np.random.default_rng(0), 30, 8, 8, 3, DEFAULT_BUDGET)
    keys = {repr((B_f.as_lists(), G_f.as_lists(), a.table.tolist())) for _, B_f, G_f, a in instances}
    assert len(keys) == 30
    uncertified = [name for name, B_f, G_f, a in instances if scf_action_violation(a, B_f, G_f) is not None]
    assert len(uncertified) >= 20
    moved = [name for name, B_f, G_f, a in instances if t_step(B_f, G_f, a) != G_f]
    assert sorted(moved) == sorted(uncertified)


def test_maximality_instances_do_not_repeat_the_fixed_case():
    instances = maximality_instances(np.random.default_rng(0), 30, DEFAULT_BUDGET)
    keys = [repr((B_f.as_lists(), G_f.as_lists(), a.table.tolist())) for _, B_f, G_f, a in instances]
    assert len(set(keys)) == len(keys) == 30


def test_top_instances_include_moving_towers():
    instances = top_instances(np.random.default_rng(0), 16, DEFAULT_BUDGET)
    assert len(instances) == 16
    moving = [name for name, B, G, a in instances if len(t_top_infinity(B, G, a).levels) > 1]
    assert len(moving) >= 4


def test_scf_adjunction_instances_prefer_nontrivial_hom_sets():
    instances = scf_adjunction_instances(np.random.default_rng(0), 9, DEFAULT_BUDGET)
    sizes = [
        len(enumerate_equivariant_morphisms(restrict_group_action(alpha, X.base), Y.base, X.target_f, Y.target_f))
        for _, alpha, X, Y in instances
    ]
    assert len(sizes) == 9
    assert sum(size > 1 for size in sizes) >= 6


def test_discrete_top_adjunction_counts_plain_homomorphisms():
    Z2, Z4 = cyclic(2), cyclic(4)
    B = validate_topgroup(Z2, discrete(2))
    G = validate_topgroup(Z4, discrete(4))
    neg = inversion_action(Z4)
    instances = []
    for name in ("Z2", "Z4", "V4"):
        H = get_group(name)
        X = validate_topgroup(H, discrete(H.order))
        instances.append((name, ContinuousAction(B, X, trivial_action(Z2, H), True)))
    report = verify_top_adjunction(B, G, neg, instances=instances, instance="d")
    assert report.passed
    assert next(c for c in report.checks if c.check == "tower").detail["levels"] == 1
    for name, X in instances:
        plain = [f for f in enumerate_homomorphisms(X.target.group, Z4) if is_equivariant(f, X.action, neg)]
        check = next(c for c in report.checks if c.instance == f"d/{name}")
        assert check.detail["left"] == check.detail["right"] == len(plain)
    assert next(c for c in report.checks if c.instance == "d/Z2").detail["left"] == 2
