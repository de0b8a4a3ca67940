"""Concentrated liquidity inside a single active tick range.

Within the active range a V3 pool is a constant-product pool over its
virtual reserves ``(L / sqrtP, L * sqrtP)``, so swaps delegate to the V2
real-valued rule and the price is read back from the new virtual reserves.
Crossing a tick boundary is not modelled; such swaps raise ``TickRangeExit``.
"""

from __future__ import annotations

import math
from dataclasses import replace

from statetwin.engine import v2
from statetwin.engine.types import Observation, SwapInput, V2State, V3State
from statetwin.errors import TickRangeExit


def virtual_reserves(state: V3State):
    return state.liquidity / state.sqrt_price, state.liquidity * state.sqrt_price


def as_v2(state: V3State) -> V2State:
    r0, r1 = virtual_reserves(state)
    return V2State(reserve0=r0, reserve1=r1, fee=state.fee)


def swap_active(state: V3State, swap: SwapInput):
    if swap.amount_in == 0:
        v2._check_swap(as_v2(state), swap)
        return state, 0, v2.InvariantDrift()
    virt, out, drift = v2.swap_real(as_v2(state), swap)
    new_sqrt = math.sqrt(virt.reserve1 / virt.reserve0)
    if not state.in_range(new_sqrt):
        raise TickRangeExit(
            f"post-swap sqrt price {new_sqrt} leaves [{state.sqrt_price_lower}, "
            f"{state.sqrt_price_upper}) for ticks [{state.tick_lower}, {state.tick_upper})"
        )
    return replace(state, sqrt_price=new_sqrt), out, drift


def observe(state: V3State, numeraire: int = 1, lp_fraction: float = 0.0) -> Observation:
    spot = state.sqrt_price**2
    r0, r1 = virtual_reserves(state)
    tvl = r0 * spot + r1 if numeraire == 1 else r0 + r1 / spot
    return Observation(spot_price=spot, tvl=tvl, position_value=lp_fraction * tvl)


def position_amounts(liquidity: float, sqrt_price: float, sqrt_lower: float, sqrt_upper: float):
    """Token amounts held by a range position at a given price."""
    s = min(max(sqrt_price, sqrt_lower), sqrt_upper)
    amount0 = liquidity * (1 / s - 1 / sqrt_upper)
    amount1 = liquidity * (s - sqrt_lower)
    return amount0, amount1
