"""Position analytics: IL diagnosis, price-move scenarios, break-even, portfolios."""

from __future__ import annotations

import math

from scipy.optimize import bisect

from statetwin.engine import stableswap, transition
from statetwin.engine.types import BalancerState, StableswapState, V3State, sqrt_price_at_tick
from statetwin.engine.v3 import position_amounts
from statetwin.errors import (
    EmptyPortfolio,
    FractionOutOfRange,
    NonPositiveApr,
    NonPositiveEntry,
    NoRoot,
    TickRangeExit,
    UnsupportedProtocol,
)
from statetwin.primitives.base import Primitive, lp_share, positive
from statetwin.primitives.market import drive_to_price, il_closed_form
from statetwin.primitives.results import (
    BreakEvenPoint,
    PortfolioAggregate,
    PositionAnalysis,
    PriceMoveScenario,
)

BREAKEVEN_BAND = 1e-6
PRICE_RATIO_BRACKET = (1.0, 1e6)


def _asset_prices(state) -> list:
    """Price of each asset in units of token1."""
    if isinstance(state, StableswapState):
        return [1.0 if k == 1 else stableswap.spot_price(state, k, 1) for k in range(state.n_assets)]
    return [transition.observe(state).spot_price, 1.0]


def _closed_form_state(twin):
    if isinstance(twin.state, V3State):
        raise UnsupportedProtocol("range positions have no closed-form IL; use simulate_price_move")
    return twin.state


class AnalyzePosition(Primitive):
    """Compare an LP position against holding its entry basket at today's spot."""

    name = "analyze_position"

    def apply(self, twin, lp_init_amt=1.0, entry_x_amt=1.0, entry_y_amt=1.0) -> PositionAnalysis:
        positive(entry_x_amt, NonPositiveEntry, "entry_x_amt")
        positive(entry_y_amt, NonPositiveEntry, "entry_y_amt")
        positive(lp_init_amt, NonPositiveEntry, "lp_init_amt")
        state = _closed_form_state(twin)
        obs = twin.observe()
        if isinstance(state, BalancerState):
            entry_price = (entry_y_amt / state.weight1) / (entry_x_amt / state.weight0)
        else:
            entry_price = entry_y_amt / entry_x_amt
        rho = float(obs.spot_price) / entry_price
        il = il_closed_form(state, rho)
        position_value = lp_share(twin, lp_init_amt) * float(obs.tvl)
        hold_value = entry_x_amt * float(obs.spot_price) + entry_y_amt
        pnl = position_value - hold_value
        if abs(pnl) < BREAKEVEN_BAND * hold_value:
            diagnosis = "breakeven-band"
        else:
            diagnosis = "profitable" if pnl > 0 else "underwater"
        return PositionAnalysis(
            diagnosis=diagnosis,
            net_pnl=pnl,
            il_percentage=100 * il,
            hold_value=hold_value,
            position_value=position_value,
            price_ratio=rho,
        )


class SimulatePriceMove(Primitive):
    """Arbitrage a fork to ``spot * (1 + price_change_pct)`` and value the position there.

    For V3 twins the position is a range position over ``[lwr_tick, upr_tick)``
    (default: the pool's active range) holding ``position_size_lp / lp_supply``
    of the active liquidity. A target outside the active range is not swapped
    to; the position is valued as its boundary basket at the target price and
    reported with ``in_range=False``.
    """

    name = "simulate_price_move"

    def apply(self, twin, price_change_pct=0.0, position_size_lp=1.0, lwr_tick=None, upr_tick=None):
        if not (math.isfinite(price_change_pct) and price_change_pct > -1):
            raise FractionOutOfRange(f"price_change_pct must exceed -1, got {price_change_pct}")
        share = lp_share(twin, position_size_lp)
        if isinstance(twin.state, V3State):
            return self._range_position(twin, price_change_pct, share, lwr_tick, upr_tick)
        before = twin.state
        prices_before = _asset_prices(before)
        reserves = [float(r) for r in transition.reserves_of(before)]
        value_before = share * sum(r * p for r, p in zip(reserves, prices_before))
        target = prices_before[0] * (1 + price_change_pct)
        fork = twin.clone()
        if price_change_pct != 0:
            drive_to_price(fork, target)
        prices_after = _asset_prices(fork.state)
        after = [float(r) for r in transition.reserves_of(fork.state)]
        value_after = share * sum(r * p for r, p in zip(after, prices_after))
        hold_after = share * sum(r * p for r, p in zip(reserves, prices_after))
        return PriceMoveScenario(
            price_change_pct=price_change_pct,
            position_value_before=value_before,
            position_value_after=value_after,
            hold_value_after=hold_after,
            il_percentage=100 * (value_after / hold_after - 1),
            target_price=target,
            spot_price_after=prices_after[0],
        )

    def _range_position(self, twin, pct, share, lwr_tick, upr_tick) -> PriceMoveScenario:
        state: V3State = twin.state
        lwr = state.tick_lower if lwr_tick is None else int(lwr_tick)
        upr = state.tick_upper if upr_tick is None else int(upr_tick)
        if not lwr < upr:
            raise FractionOutOfRange(f"position range [{lwr}, {upr}) is empty")
        sp_a = sqrt_price_at_tick(lwr, state.decimal_shift)
        sp_b = sqrt_price_at_tick(upr, state.decimal_shift)
        liquidity = share * state.liquidity
        spot = state.sqrt_price**2
        a0, a1 = position_amounts(liquidity, state.sqrt_price, sp_a, sp_b)
        value_before = a0 * spot + a1
        target = spot * (1 + pct)
        target_sp = math.sqrt(target)
        fork = twin.clone()
        pool_in_range = state.in_range(target_sp)
        if pct != 0 and pool_in_range:
            try:
                drive_to_price(fork, target)
            except TickRangeExit:
                pool_in_range = False
        if pool_in_range:
            sp_after = fork.state.sqrt_price
            price = sp_after**2
        else:
            sp_after = min(max(target_sp, state.sqrt_price_lower), state.sqrt_price_upper)
            price = target
        b0, b1 = position_amounts(liquidity, sp_after, sp_a, sp_b)
        value_after = b0 * price + b1
        hold_after = a0 * price + a1
        return PriceMoveScenario(
            price_change_pct=pct,
            position_value_before=value_before,
            position_value_after=value_after,
            hold_value_after=hold_after,
            il_percentage=100 * (value_after / hold_after - 1),
            target_price=target,
            spot_price_after=price,
            in_range=pool_in_range and sp_a <= target_sp < sp_b,
        )


class FindBreakEvenPrice(Primitive):
    """Price ratios at which accumulated fees ``F`` exactly offset IL.

    Solves ``IL(rho) + F = 0`` by bisection, upward on ``[1, 1e6]`` and
    downward on ``[1e-6, 1]``.
    """

    name = "find_break_even_price"

    def apply(self, twin, accumulated_fee_fraction=0.0) -> BreakEvenPoint:
        f = accumulated_fee_fraction
        if not (math.isfinite(f) and 0 <= f < 1):
            raise FractionOutOfRange(f"accumulated_fee_fraction must be in [0, 1), got {f}")
        state = _closed_form_state(twin)
        if f == 0:
            return BreakEvenPoint(il_percentage=0.0, break_even_price_ratio=1.0, downside_price_ratio=1.0)

        def gap(rho):
            return il_closed_form(state, rho) + f

        lo, hi = PRICE_RATIO_BRACKET
        if gap(hi) > 0 or gap(1 / hi) > 0:
            raise NoRoot(f"fees of {f:.6g} exceed the IL reachable within price ratio {hi:g}")
        up = bisect(gap, lo, hi, xtol=1e-13, rtol=1e-15, maxiter=400)
        down = bisect(gap, 1 / hi, lo, xtol=1e-16, rtol=1e-15, maxiter=400)
        return BreakEvenPoint(il_percentage=-100 * f, break_even_price_ratio=up, downside_price_ratio=down)


class FindBreakEvenTime(Primitive):
    """Days of linear fee accrual at ``fee_apr`` needed to cover IL at ``price_ratio``."""

    name = "find_break_even_time"

    def apply(self, twin, fee_apr=0.0, price_ratio=1.0) -> BreakEvenPoint:
        positive(fee_apr, NonPositiveApr, "fee_apr")
        positive(price_ratio, FractionOutOfRange, "price_ratio")
        il = il_closed_form(_closed_form_state(twin), price_ratio)
        return BreakEvenPoint(il_percentage=100 * il, break_even_days=abs(il) / fee_apr * 365)


class AggregatePortfolio(Primitive):
    """Total value of ``(twin, lp_amount[, conversion_rate])`` positions in a common unit."""

    name = "aggregate_portfolio"

    def apply(self, positions) -> PortfolioAggregate:
        positions = list(positions)
        if not positions:
            raise EmptyPortfolio("portfolio has no positions")
        values = []
        for entry in positions:
            twin, lp_amount, *rest = entry
            rate = rest[0] if rest else 1.0
            values.append(lp_share(twin, lp_amount) * float(twin.observe().tvl) * rate)
        return PortfolioAggregate(total_value=math.fsum(values), position_values=values)
