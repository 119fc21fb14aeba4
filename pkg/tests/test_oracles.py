from __future__ import annotations

import numpy as np
import pytest

from coind_lab.action import conjugation_action, inversion_action, scf_action_violation
from coind_lab.catalog import cyclic, get_group
from coind_lab.coinduction import t_infinity
from coind_lab.config import DEFAULT_BUDGET
from coind_lab.errors import BudgetExceeded
from coind_lab.filtration import Filtration, constant_filtration, is_strongly_central, lower_central_series
from coind_lab.oracles import (
    lcs_orders,
    oracle_acts_filtered,
    oracle_is_strongly_central,
    oracle_lower_central_series,
    oracle_max_subfiltration,
)
from coind_lab.verify import transport_instances


def test_oracle_lcs_as_sets():
    D4 = get_group("D4")
    terms = oracle_lower_central_series(D4)
    assert [len(t) for t in terms] == [8, 2, 1]
    assert terms[1] == {D4.index("1"), D4.index("r2")}
    assert lcs_orders(get_group("S3")) == (6, 3)


def test_oracle_strong_centrality_agrees():
    D4 = get_group("D4")
    flag = Filtration.from_members(D4, [list(range(8)), [0, D4.index("s")]])
    assert oracle_is_strongly_central(lower_central_series(D4))
    assert not oracle_is_strongly_central(flag)
    assert not is_strongly_central(flag)


def test_max_subfiltration_matches_transport_on_negation():
    Z4 = cyclic(4)
    B_f = constant_filtration(cyclic(2).full)
    G_f = Filtration.from_members(Z4, [[0, 1, 2, 3], [0, 2], [0]])
    a = inversion_action(Z4)
    oracle = oracle_max_subfiltration(B_f, G_f, a)
    assert oracle.orders == (2, 2, 1)
    assert oracle == t_infinity(B_f, G_f, a).limit


def test_max_subfiltration_of_certified_input_is_itself():
    D4 = get_group("D4")
    lcs = lower_central_series(D4)
    assert oracle_max_subfiltration(lcs, lcs, conjugation_action(D4)) == lcs


def test_oracle_refuses_large_groups():
    D6 = get_group("D6")
    lcs = lower_central_series(D6)
    with pytest.raises(BudgetExceeded) as exc:
        oracle_max_subfiltration(lcs, lcs, conjugation_action(D6))
    assert exc.value.quantity == "oracle group order"


def test_elementwise_action_check_agrees_with_table_check():
    for _, B_f, G_f, a in transport_instances(np.random.default_rng(4), 20, 8, 8, 3, DEFAULT_BUDGET):
        assert oracle_acts_filtered(a, B_f, G_f) == (scf_action_violation(a, B_f, G_f) is None)
