from __future__ import annotations

import logging
import logging.handlers

import pytest

from coind_lab.config import Budget
from coind_lab.errors import BudgetExceeded
from coind_lab.logging_config import configure_logging


def test_budget_from_env():
    budget = Budget.from_env({"COIND_LAB_MAX_CANDIDATES": " 10 ", "COIND_LAB_MAX_GROUP_ORDER": ""})
    assert budget.max_candidates == 10
    assert budget.max_group_order == Budget().max_group_order


@pytest.mark.parametrize("raw", ["ten", "0", "-3"])
def test_budget_from_env_rejects_bad_values(raw):
    with pytest.raises(ValueError, match="COIND_LAB_MAX_HOM_ORDER"):
        Budget.from_env({"COIND_LAB_MAX_HOM_ORDER": raw})


def test_require_and_with_candidates():
    budget = Budget().with_candidates(5)
    budget.require("things", 5, budget.max_candidates)
    with pytest.raises(BudgetExceeded) as exc:
        budget.require("things", 6, budget.max_candidates)
    assert (exc.value.quantity, exc.value.required, exc.value.limit) == ("things", 6, 5)
    with pytest.raises(ValueError):
        Budget().with_candidates(0)


def test_configure_logging_installs_handlers_once(tmp_path):
    root = logging.getLogger()
    before = list(root.handlers)
    try:
        for h in before:
            root.removeHandler(h)
        path = configure_logging(str(tmp_path / "logs"))
        assert path == str(tmp_path / "logs" / "app.log")
        count = len(root.handlers)
        configure_logging(str(tmp_path / "logs"))
        assert len(root.handlers) == count
        consoles = [h for h in root.handlers if not isinstance(h, logging.handlers.RotatingFileHandler)]
        assert all(h.level == logging.WARNING for h in consoles)
    finally:
        for h in list(root.handlers):
            root.removeHandler(h)
            h.close()
        for h in before:
            root.addHandler(h)
