from __future__ import annotations

import numpy as np
import pytest

from coind_lab.action import (
    EquivariantMorphism,
    action_from_automorphisms,
    action_via_homomorphism,
    conjugation_action,
    enumerate_equivariant_morphisms,
    image_point,
    inversion_action,
    preserves_filtrations,
    restrict_action,
    restrict_to_stable_subgroup,
    scf_action_violation,
    semidirect_group,
    semidirect_product,
    trivial_action,
    uncertified_action,
    validate_group_action,
    validate_scf_action,
)
from coind_lab.catalog import cyclic, get_group
from coind_lab.errors import ActionValidationError, HomomorphismError, ScfActionViolation
from coind_lab.filtration import (
    Filtration,
    constant_filtration,
    is_strongly_central,
    lower_central_series,
    restrict_to_subgroup,
)
from coind_lab.groups import Homomorphism, Subgroup, all_subgroups


@pytest.fixture
def negation():
    Z4 = cyclic(4)
    return inversion_action(Z4), constant_filtration(cyclic(2).full), Filtration.from_members(
        Z4, [[0, 1, 2, 3], [0, 2], [0]]
    )


def test_validate_group_action_order_of_checks():
    Z2, Z3, Z4 = cyclic(2), cyclic(3), cyclic(4)
    shift = [[0, 1, 2, 3], [1, 2, 3, 0]]
    with pytest.raises(ActionValidationError) as exc:
        validate_group_action(shift, Z2, Z4)
    assert exc.value.kind == "automorphism"
    with pytest.raises(ActionValidationError) as exc:
        validate_group_action([[0, 3, 2, 1], [0, 1, 2, 3]], Z2, Z4)
    assert exc.value.kind == "unit"
    inv = [0, 3, 2, 1]
    with pytest.raises(ActionValidationError) as exc:
        validate_group_action([[0, 1, 2, 3], inv, inv], Z3, Z4)
    assert exc.value.kind == "composition"
    with pytest.raises(ActionValidationError) as exc:
        validate_group_action([[0, 1, 2, 3]], Z2, Z4)
    assert exc.value.kind == "malformed"


def test_conjugation_bracket_is_commutator():
    D4 = get_group("D4")
    a = conjugation_action(D4)
    assert np.array_equal(a.bracket_table, D4.commutator_table)
    assert not a.is_trivial()
    assert trivial_action(D4, cyclic(3)).is_trivial()


def test_inversion_needs_abelian_target():
    with pytest.raises(ActionValidationError):
        inversion_action(get_group("S3"))
    a = inversion_action(cyclic(4))
    assert a.bracket(1, 1) == 2


def test_action_via_homomorphism_and_automorphisms():
    D4 = get_group("D4")
    rot = Homomorphism(cyclic(4), D4, [0, 1, 2, 3])
    a = action_via_homomorphism(rot)
    s = D4.index("s")
    assert D4.names[a.act(1, s)] == "sr2"
    same = action_from_automorphisms(cyclic(4), [a.automorphism(b) for b in range(4)])
    assert same == a


def test_scf_action_violation_least_pair(negation):
    a, B_f, G_f = negation
    violation = scf_action_violation(a, B_f, G_f)
    assert violation.kind == "bracket"
    assert (violation.i, violation.j) == (2, 1)
    assert violation.witness == (1, 1)
    with pytest.raises(ScfActionViolation):
        validate_scf_action(a, B_f, G_f)
    assert not uncertified_action(a, B_f, G_f).certified


def test_preservation_is_checked_before_brackets():
    D4 = get_group("D4")
    flag = Filtration.from_members(D4, [list(range(8)), [0, D4.index("s")]])
    violation = scf_action_violation(conjugation_action(D4), lower_central_series(D4), flag)
    assert violation.kind == "preservation"
    assert violation.i == 2
    assert violation.witness == (1, D4.index("s"))


def test_certified_conjugation_and_semidirect_product():
    D4 = get_group("D4")
    lcs = lower_central_series(D4)
    s = validate_scf_action(conjugation_action(D4), lcs, lcs)
    assert s.certified
    sp = semidirect_product(s)
    assert sp.group.order == 64
    assert is_strongly_central(sp.filtration)
    assert sp.filtration.orders == (64, 4, 1)
    assert sp.projection.compose(sp.section) == Homomorphism.identity(D4)


def test_semidirect_commutator_is_bracket():
    a = inversion_action(cyclic(4))
    P = semidirect_group(a)
    assert P.order == 8 and not P.is_abelian
    x, y = 1 * 4 + 0, 0 * 4 + 1
    assert P.commutator(x, y) == 0 * 4 + a.bracket(1, 1)


def test_restrict_action_along_filtered_map():
    D4 = get_group("D4")
    lcs = lower_central_series(D4)
    s = validate_scf_action(conjugation_action(D4), lcs, lcs)
    R4 = cyclic(4)
    R_f = Filtration.from_members(R4, [[0, 1, 2, 3], [0, 2], [0]])
    rot = Homomorphism(R4, D4, [0, 1, 2, 3])
    assert preserves_filtrations(rot, R_f, lcs) is None
    pulled = restrict_action(rot, R_f, s)
    assert pulled.certified and pulled.actor == R4

    too_big = constant_filtration(R4.full)
    assert preserves_filtrations(rot, too_big, lcs) == (2, 1)
    with pytest.raises(ActionValidationError):
        restrict_action(rot, too_big, s)


def test_restrict_to_stable_subgroup(negation):
    a, B_f, _ = negation
    H_f = Filtration.from_members(cyclic(4), [[0, 2], [0, 2], [0]])
    point, inclusion = restrict_to_stable_subgroup(a, B_f, H_f)
    assert point.certified
    assert point.target.order == 2
    assert list(inclusion.table) == [0, 2]
    assert point.base.is_trivial()


def test_equivariant_morphisms():
    Z2 = cyclic(2)
    triv = trivial_action(Z2, Z2)
    found = enumerate_equivariant_morphisms(triv, triv)
    assert [f.key for f in found] == [(0, 0), (0, 1)]

    a = inversion_action(cyclic(4))
    to_trivial = trivial_action(Z2, Z2)
    onto = Homomorphism(cyclic(4), Z2, [0, 1, 0, 1])
    # inversion is trivial mod 2
    assert EquivariantMorphism(onto, a, to_trivial)(3) == 1
    double = Homomorphism(Z2, cyclic(4), [0, 2])
    EquivariantMorphism(double, trivial_action(Z2, Z2), a)

    D4 = get_group("D4")
    into = Homomorphism(Z2, D4, [0, D4.index("s")])
    with pytest.raises(HomomorphismError) as exc:
        EquivariantMorphism(into, trivial_action(D4, Z2), conjugation_action(D4))
    assert exc.value.kind == "equivariance"


def test_image_point_is_certified(negation):
    a, B_f, _ = negation
    Z2 = cyclic(2)
    K = validate_scf_action(trivial_action(Z2, Z2), B_f, constant_filtration(Z2.full))
    f = EquivariantMorphism(Homomorphism(Z2, cyclic(4), [0, 2]), K.base, a)
    image = image_point(f, K)
    assert image.certified
    assert image.target_f.orders == (2,)


def test_only_the_first_actor_level_must_keep_levels():
    Z2, V4 = cyclic(2), get_group("V4")
    swap = validate_group_action([[0, 1, 2, 3], [0, 2, 1, 3]], Z2, V4)
    G_f = Filtration.from_members(V4, [[0, 1, 2, 3], [0, 1], [0]])
    assert scf_action_violation(swap, Filtration(Z2, (Z2.trivial,)), G_f) is None
    violation = scf_action_violation(swap, constant_filtration(Z2.full), G_f)
    assert violation.kind == "preservation"
    assert violation.witness == (1, 1)


@pytest.mark.parametrize("name", ["S3", "D4", "Q8"])
def test_restriction_along_identity_and_composites(name):
    G = get_group(name)
    lcs = lower_central_series(G)
    P = validate_scf_action(conjugation_action(G), lcs, lcs)
    assert restrict_action(Homomorphism.identity(G), lcs, P) == P

    for H in all_subgroups(G):
        H_grp, alpha = H.as_group()
        E_f = restrict_to_subgroup(lcs, alpha)
        along_alpha = restrict_action(alpha, E_f, P)
        for K in all_subgroups(G):
            if not K.issubset(H):
                continue
            K_in_H = Subgroup.from_members(H_grp, [e for e in H_grp.elements if int(alpha.table[e]) in K])
            _, beta = K_in_H.as_group()
            D_f = restrict_to_subgroup(E_f, beta)
            assert restrict_action(beta, D_f, along_alpha) == restrict_action(alpha.compose(beta), D_f, P)
