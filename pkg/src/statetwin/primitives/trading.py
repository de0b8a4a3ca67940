"""Trade-side primitives: pool health, slippage, deposit splitting, fee tiers."""

from __future__ import annotations

import math
from dataclasses import replace

from statetwin.engine import transition
from statetwin.engine.types import ArithmeticMode, SwapInput, V2State, V3State
from statetwin.errors import (
    EmptyTierList,
    NonPositiveAmount,
    NonPositiveDeposit,
    UnsupportedInput,
    UnsupportedProtocol,
)
from statetwin.primitives.base import Primitive, positive
from statetwin.primitives.market import arbitrage_swap, marginal_price
from statetwin.primitives.results import DepositSplit, FeeTierComparison, PoolHealth, SlippageAnalysis

# tunable flag thresholds
IMBALANCE_RATIO = 1e6
DUST_RESERVE = 1e-9
DEPTH_MOVE = 0.01


class CheckPoolHealth(Primitive):
    """Spot, TVL, the token0 input that moves spot down 1%, and warning flags.

    Flags: ``empty_reserve``, ``dust_reserve`` (below ``DUST_RESERVE``),
    ``extreme_imbalance`` (reserve ratio above ``IMBALANCE_RATIO``) and, for
    V3, ``thin_range`` when a 1% move would leave the active range (depth is
    then the input that reaches the range boundary).
    """

    name = "check_pool_health"

    def apply(self, twin) -> PoolHealth:
        reserves = [float(r) for r in transition.reserves_of(twin.state)]
        if min(reserves) <= 0:
            return PoolHealth(spot_price=0.0, tvl=0.0, depth_1pct=0.0, health_flags=["empty_reserve"])
        flags = []
        if min(reserves) < DUST_RESERVE:
            flags.append("dust_reserve")
        if max(reserves) / min(reserves) > IMBALANCE_RATIO:
            flags.append("extreme_imbalance")
        obs = twin.observe()
        spot = float(obs.spot_price)
        target = spot * (1 - DEPTH_MOVE)
        state = twin.state
        if isinstance(state, V3State) and math.sqrt(target) < state.sqrt_price_lower:
            flags.append("thin_range")
            target = state.sqrt_price_lower**2
        depth, _ = arbitrage_swap(state, target)
        return PoolHealth(spot_price=spot, tvl=float(obs.tvl), depth_1pct=depth, health_flags=flags)


class CalculateSlippage(Primitive):
    """Execution price of a swap against the fee-free marginal price, on a fork."""

    name = "calculate_slippage"

    def apply(self, twin, amount_in=0.0, token_in=0, token_out=None) -> SlippageAnalysis:
        positive(amount_in, NonPositiveAmount, "amount_in")
        j = 1 - token_in if token_out is None else token_out
        spot = marginal_price(twin.state, token_in, j)
        fork = twin.clone()
        receipt = fork.swap(amount_in, token_in, token_out)
        execution = float(receipt.amount_out) / float(amount_in)
        # rounding can leave a tiny negative value for dust-sized trades
        slippage = max(0.0, 100 * (1 - execution / spot))
        return SlippageAnalysis(
            spot_price=spot,
            execution_price=execution,
            slippage_pct=slippage,
            amount_out=float(receipt.amount_out),
        )


def split_amount(r_in, deposit, fee=0.0) -> float:
    """Swap size that leaves ``deposit - s`` and the swap output in pool ratio.

    Root of ``g*s^2 + r_in*(1+g)*s - deposit*r_in = 0`` in cancellation-free
    form; with no fee this is ``sqrt(r_in*(r_in+deposit)) - r_in``.
    """
    g = 1 - fee
    b = r_in * (1 + g)
    return 2 * deposit * r_in / (b + math.sqrt(b * b + 4 * g * deposit * r_in))


class OptimalDepositSplit(Primitive):
    """Single-sided V2 deposit: swap part of it, then join proportionally."""

    name = "optimal_deposit_split"

    def apply(self, twin, deposit_amount=0.0, token_index=0) -> DepositSplit:
        positive(deposit_amount, NonPositiveDeposit, "deposit_amount")
        state = twin.state
        if not isinstance(state, V2State):
            raise UnsupportedProtocol("optimal_deposit_split needs a V2 twin")
        if token_index not in (0, 1):
            raise UnsupportedInput(f"token_index must be 0 or 1, got {token_index}")
        reserves = [float(state.reserve0), float(state.reserve1)]
        r_in = reserves[token_index]
        s = split_amount(r_in, deposit_amount, float(state.fee))
        fork = twin.clone()
        fork.mode = ArithmeticMode.REAL
        receipt = fork.swap(s, token_index)
        after = [float(fork.state.reserve0), float(fork.state.reserve1)]
        kept_in, got_out = deposit_amount - s, float(receipt.amount_out)
        held = [0.0, 0.0]
        held[token_index], held[1 - token_index] = kept_in, got_out
        share = min(held[0] / after[0], held[1] / after[1])
        rest = [held[k] - share * after[k] for k in (0, 1)]
        # leftover valued in the deposited token at the post-swap pool price
        price_out_in = after[token_index] / after[1 - token_index]
        leftover = rest[token_index] + rest[1 - token_index] * price_out_in
        return DepositSplit(
            swap_amount=s,
            deposit0=held[0],
            deposit1=held[1],
            leftover=leftover,
            lp_minted=share * float(fork.lp_supply),
        )


class CompareFeeTiers(Primitive):
    """The same swap on forks that differ only in fee; best tier maximises output."""

    name = "compare_fee_tiers"

    def apply(self, twin, amount_in=0.0, tiers=(), token_in=0) -> FeeTierComparison:
        tiers = [float(t) for t in tiers]
        if not tiers:
            raise EmptyTierList("no fee tiers to compare")
        positive(amount_in, NonPositiveAmount, "amount_in")
        amounts = []
        for tier in tiers:
            if not 0 <= tier < 1:
                raise UnsupportedInput(f"fee tier must be in [0, 1), got {tier}")
            fork = twin.clone()
            fork.state = replace(fork.state, fee=tier)
            receipt = fork.apply(SwapInput(amount_in, token_in, ArithmeticMode.REAL))
            amounts.append(float(receipt.amount_out))
        best = max(range(len(tiers)), key=lambda k: (amounts[k], -k))
        return FeeTierComparison(tiers=tiers, amounts_out=amounts, best_tier=best)
