"""Typed result records returned by primitives.

Every record flattens to a JSON-ready dict with ``to_dict`` and back with
``from_dict``; percentages are in percent, values in the numeraire token.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields
from decimal import Decimal
from fractions import Fraction
from typing import List, Optional


def jsonable(value):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (Fraction, Decimal)):
        return float(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


class Record:
    def to_dict(self) -> dict:
        return jsonable(asdict(self))

    @classmethod
    def from_dict(cls, data: dict):
        names = {f.name for f in fields(cls)}
        kwargs = {}
        for key, value in data.items():
            if key not in names:
                continue
            if value == "inf":
                value = math.inf
            elif value == "-inf":
                value = -math.inf
            kwargs[key] = value
        return cls(**kwargs)


@dataclass(frozen=True)
class PositionAnalysis(Record):
    diagnosis: str
    net_pnl: float
    il_percentage: float
    hold_value: float
    position_value: float
    price_ratio: float


@dataclass(frozen=True)
class PriceMoveScenario(Record):
    price_change_pct: float
    position_value_before: float
    position_value_after: float
    hold_value_after: float
    il_percentage: float
    target_price: float
    spot_price_after: float
    in_range: bool = True


@dataclass(frozen=True)
class PoolHealth(Record):
    spot_price: float
    tvl: float
    depth_1pct: float
    health_flags: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class SlippageAnalysis(Record):
    spot_price: float
    execution_price: float
    slippage_pct: float
    amount_out: float


@dataclass(frozen=True)
class DepositSplit(Record):
    swap_amount: float
    deposit0: float
    deposit1: float
    leftover: float
    lp_minted: float


@dataclass(frozen=True)
class FeeTierComparison(Record):
    tiers: List[float]
    amounts_out: List[float]
    best_tier: int


@dataclass(frozen=True)
class BreakEvenPoint(Record):
    il_percentage: float
    break_even_price_ratio: Optional[float] = None
    downside_price_ratio: Optional[float] = None
    break_even_days: Optional[float] = None


@dataclass(frozen=True)
class PortfolioAggregate(Record):
    total_value: float
    position_values: List[float]


@dataclass(frozen=True)
class DepegRisk(Record):
    depeg_epsilon: float
    lp_loss_delta: float
    value_before: float
    value_after: float
    arbitrage_amount_in: float
