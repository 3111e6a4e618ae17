"""Shared enums and per-query records for slp-access.

Grammar types live in `slp.core`; the records here are the ones every
query layer passes around (sides of a heavy path, engine modes, cost
counters).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum, IntEnum
from typing import Any, Dict, List


class Side(IntEnum):
    """Which side of a heavy path a light child hangs on."""

    LEFT = 0
    RIGHT = 1

    @property
    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


class EngineMode(Enum):
    BASELINE = "baseline"
    LINEAR = "linear"
    BIASED = "biased"


class StepCase(Enum):
    HIT_Z = "hit-z"
    DESCEND_LEFT = "descend-left-light"
    DESCEND_RIGHT = "descend-right-light"


@dataclass
class QueryCost:
    """Counters for one query. Owned by the caller, never shared."""

    rule_visits: int = 0
    predecessor_visits: int = 0
    path_switches: int = 0
    fallbacks: int = 0
    route: List[str] = field(default_factory=list)

    def add(self, other: "QueryCost") -> None:
        self.rule_visits += other.rule_visits
        self.predecessor_visits += other.predecessor_visits
        self.path_switches += other.path_switches
        self.fallbacks += other.fallbacks
        self.route.extend(other.route)

    def as_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out.pop("route")
        return out
