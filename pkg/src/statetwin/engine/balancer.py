"""Two-asset weighted pools (Balancer), real-valued only."""

from __future__ import annotations

import math
from dataclasses import replace

from statetwin.engine.types import BalancerState, InvariantDrift, Observation, SwapInput
from statetwin.errors import DrainedReserve, EmptyPool, NonPositiveAmount, UnsupportedInput


def invariant(state: BalancerState) -> float:
    return state.reserve0**state.weight0 * state.reserve1**state.weight1


def spot_price(state: BalancerState) -> float:
    """Marginal price of token0 in token1."""
    return (state.reserve1 / state.weight1) / (state.reserve0 / state.weight0)


def amount_out(r_in, r_out, w_in, w_out, amount_in, fee=0.0):
    """Out-given-in: r_out * (1 - (r_in / (r_in + net_in)) ** (w_in / w_out)).

    Returns ``(amount_out, new_r_out)``. Evaluated through log1p/expm1, with
    the smaller of the two quantities computed directly, so neither loses
    relative precision to cancellation.
    """
    net = (1 - fee) * amount_in
    exponent = -(w_in / w_out) * math.log1p(net / r_in)
    out = -r_out * math.expm1(exponent)
    if out <= r_out / 2:
        return out, r_out - out
    remaining = r_out * math.exp(exponent)
    return r_out - remaining, remaining


def swap(state: BalancerState, swap_input: SwapInput):
    if swap_input.amount_in < 0:
        raise NonPositiveAmount(f"amount_in must be nonnegative, got {swap_input.amount_in}")
    if swap_input.token_in not in (0, 1):
        raise UnsupportedInput(f"token_in {swap_input.token_in} invalid for a two-asset pool")
    if state.empty:
        raise EmptyPool("pool has an empty reserve")
    if swap_input.amount_in == 0:
        return state, 0.0, InvariantDrift()
    if swap_input.token_in == 0:
        r_in, r_out, w_in, w_out = state.reserve0, state.reserve1, state.weight0, state.weight1
    else:
        r_in, r_out, w_in, w_out = state.reserve1, state.reserve0, state.weight1, state.weight0
    out, new_out = amount_out(r_in, r_out, w_in, w_out, swap_input.amount_in, state.fee)
    if new_out <= 0:
        raise DrainedReserve(f"output {out} would drain reserve {r_out}")
    new_in = r_in + swap_input.amount_in
    if swap_input.token_in == 0:
        new = replace(state, reserve0=new_in, reserve1=new_out)
    else:
        new = replace(state, reserve0=new_out, reserve1=new_in)
    accrual = invariant(new) - invariant(state) if state.fee else 0.0
    return new, out, InvariantDrift(fee_accrual=max(accrual, 0.0))


def observe(state: BalancerState, numeraire: int = 1, lp_fraction: float = 0.0) -> Observation:
    spot = spot_price(state)
    tvl1 = state.reserve0 * spot + state.reserve1
    tvl = tvl1 if numeraire == 1 else tvl1 / spot
    return Observation(spot_price=spot, tvl=tvl, position_value=lp_fraction * tvl)
