from __future__ import annotations

import pytest

from coind_lab.catalog import SMALL_GROUPS, dihedral, get_group, groups_up_to, quaternion, symmetric


def test_catalog_orders():
    expected = {"1": 1, "Z2": 2, "V4": 4, "S3": 6, "D4": 8, "Q8": 8, "A4": 12, "Z2xD4": 16, "Z4xZ4": 16}
    for name, order in expected.items():
        assert get_group(name).order == order
    assert all(get_group(n).order <= 16 for n in SMALL_GROUPS)


def test_dihedral_relations():
    D4 = dihedral(4)
    r, s = D4.index("r"), D4.index("s")
    assert D4.names[:4] == ("1", "r", "r2", "r3")
    assert D4.names[D4.op(s, r)] == "sr"
    assert D4.names[D4.op(r, s)] == "sr3"
    assert D4.element_orders[r] == 4 and D4.element_orders[s] == 2
    assert not D4.is_abelian


def test_quaternion_units():
    Q8 = quaternion()
    i, j, k = Q8.index("i"), Q8.index("j"), Q8.index("k")
    assert Q8.op(i, j) == k
    assert Q8.names[Q8.op(i, i)] == "-1"
    assert Q8.names[Q8.op(j, i)] == "-k"
    assert sorted(Q8.element_orders) == [1, 2, 4, 4, 4, 4, 4, 4]


def test_symmetric_composes_right_to_left():
    S3 = symmetric(3)
    a, b = S3.index("(12)"), S3.index("(23)")
    # apply (23) first: 1 -> 2, 2 -> 3, 3 -> 1
    assert S3.names[S3.op(a, b)] == "(123)"
    assert S3.order == 6 and not S3.is_abelian
    with pytest.raises(ValueError):
        symmetric(5)


def test_products_and_lookup():
    G = get_group("Z2xZ2")
    assert G.order == 4 and G.is_abelian
    assert get_group("Z2xZ2") is G
    with pytest.raises(KeyError):
        get_group("W7")
    assert set(groups_up_to(4)) == {"1", "Z2", "Z3", "Z4", "V4"}
