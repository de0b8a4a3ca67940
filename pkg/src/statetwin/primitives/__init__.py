"""Analytical primitives over twins, each returning a typed record.

    result = AnalyzePosition().apply(twin, lp_init_amt=1.0, entry_x_amt=1000.0, entry_y_amt=100000.0)
    result.diagnosis, result.il_percentage
"""

from statetwin.primitives.base import Primitive
from statetwin.primitives.market import arbitrage_swap, drive_to_price, il_closed_form, il_constant_product, il_weighted
from statetwin.primitives.position import (
    AggregatePortfolio,
    AnalyzePosition,
    FindBreakEvenPrice,
    FindBreakEvenTime,
    SimulatePriceMove,
)
from statetwin.primitives.results import (
    BreakEvenPoint,
    DepegRisk,
    DepositSplit,
    FeeTierComparison,
    PoolHealth,
    PortfolioAggregate,
    PositionAnalysis,
    PriceMoveScenario,
    SlippageAnalysis,
)
from statetwin.primitives.risk import AssessDepegRisk
from statetwin.primitives.trading import CalculateSlippage, CheckPoolHealth, CompareFeeTiers, OptimalDepositSplit, split_amount

PRIMITIVES = {
    cls.name: cls
    for cls in (
        AnalyzePosition,
        SimulatePriceMove,
        CheckPoolHealth,
        CalculateSlippage,
        OptimalDepositSplit,
        CompareFeeTiers,
        FindBreakEvenPrice,
        FindBreakEvenTime,
        AggregatePortfolio,
        AssessDepegRisk,
    )
}


def get(name: str) -> Primitive:
    from statetwin.errors import UnsupportedInput

    try:
        return PRIMITIVES[name]()
    except KeyError:
        raise UnsupportedInput(f"unknown primitive {name!r}") from None


def dispatch(name: str, twin, **kwargs):
    """Run primitive ``name`` on ``twin``."""
    return get(name).apply(twin, **kwargs)


__all__ = [
    "PRIMITIVES", "AggregatePortfolio", "AnalyzePosition", "AssessDepegRisk", "BreakEvenPoint",
    "CalculateSlippage", "CheckPoolHealth", "CompareFeeTiers", "DepegRisk", "DepositSplit",
    "FeeTierComparison", "FindBreakEvenPrice", "FindBreakEvenTime", "OptimalDepositSplit",
    "PoolHealth", "PortfolioAggregate", "PositionAnalysis", "Primitive", "PriceMoveScenario",
    "SimulatePriceMove", "SlippageAnalysis", "arbitrage_swap", "dispatch", "drive_to_price",
    "get", "il_closed_form", "il_constant_product", "il_weighted", "split_amount",
]
