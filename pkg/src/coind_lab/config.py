from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace
from typing import Dict, Mapping, Optional

from .errors import BudgetExceeded

logger = logging.getLogger(__name__)


ENV_OVERRIDES: Dict[str, str] = {
    "COIND_LAB_MAX_GROUP_ORDER": "max_group_order",
    "COIND_LAB_MAX_HOM_ORDER": "max_hom_order",
    "COIND_LAB_MAX_CANDIDATES": "max_candidates",
    "COIND_LAB_MAX_CARRIER_ORDER": "max_carrier_order",
}


@dataclass(frozen=True)
class Budget:
    """Enumeration limits. Every exhaustive loop checks its size here first."""

    max_group_order: int = 16
    max_hom_order: int = 8
    max_candidates: int = 200_000
    max_carrier_order: int = 256
    max_set_maps: int = 65_536
    max_opens: int = 65_536
    max_tower_steps: int = 64

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Budget":
        env = os.environ if environ is None else environ
        overrides: Dict[str, int] = {}
        for var, attr in ENV_OVERRIDES.items():
            raw = env.get(var)
            if raw is None or not raw.strip():
                continue
            try:
                value = int(raw.strip())
            except ValueError as e:
                raise ValueError(f"{var} must be an integer, got '{raw}'") from e
            if value <= 0:
                raise ValueError(f"{var} must be positive, got {value}")
            overrides[attr] = value
        return replace(cls(), **overrides)

    def with_candidates(self, n: int) -> "Budget":
        if n <= 0:
            raise ValueError(f"budget must be positive, got {n}")
        return replace(self, max_candidates=n)

    def require(self, quantity: str, required: int, limit: int) -> None:
        if required > limit:
            logger.warning("Refusing %s: need %d, limit %d", quantity, required, limit)
            raise BudgetExceeded(quantity, required, limit)


DEFAULT_BUDGET = Budget()
