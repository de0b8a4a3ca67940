"""Price-ratio math shared by the primitives: impermanent loss and arbitrage.

``arbitrage_swap`` finds the single swap that moves a pool's spot price
(token1 per token0) exactly onto a target. Constant-product families solve a
quadratic; Balancer and stableswap pools root-find on the input size.
"""

from __future__ import annotations

import math

from scipy.optimize import brentq

from statetwin.engine import stableswap, transition
from statetwin.engine.types import (
    ArithmeticMode,
    BalancerState,
    StableswapState,
    SwapInput,
    V2State,
    V3State,
)
from statetwin.engine.v3 import as_v2
from statetwin.errors import NewtonNonConvergence, UnsupportedProtocol

MAX_BRACKET_DOUBLINGS = 200


def il_constant_product(price_ratio: float) -> float:
    """LP value over hold value, minus one, for a 50/50 constant-product pool."""
    return 2 * math.sqrt(price_ratio) / (1 + price_ratio) - 1


def il_weighted(price_ratio: float, weight0: float) -> float:
    """The weighted-pool generalisation; reduces to the constant-product form at 0.5."""
    if weight0 == 0.5:
        return il_constant_product(price_ratio)
    return price_ratio**weight0 / (weight0 * price_ratio + (1 - weight0)) - 1


def il_closed_form(state, price_ratio: float) -> float:
    if isinstance(state, V2State):
        return il_constant_product(price_ratio)
    if isinstance(state, BalancerState):
        return il_weighted(price_ratio, state.weight0)
    raise UnsupportedProtocol(
        f"no closed-form impermanent loss for {transition.protocol_of(state)} pools"
    )


def _quadratic_input(r_in, r_out, fee, k_target):
    # (r_in + g*d)(r_in + d) = k_target, solved without cancellation
    g = 1 - fee
    c = k_target - r_in * r_in
    b = r_in * (1 + g)
    return 2 * c / (b + math.sqrt(b * b + 4 * g * c))


def _constant_product_arbitrage(state: V2State, target: float):
    r0, r1 = float(state.reserve0), float(state.reserve1)
    k = r0 * r1
    fee = float(state.fee)
    if target < r1 / r0:
        return _quadratic_input(r0, r1, fee, k / target), 0
    return _quadratic_input(r1, r0, fee, k * target), 1


def _spot(state) -> float:
    return transition.observe(state).spot_price


def _root_find_arbitrage(state, target: float):
    spot = _spot(state)
    token_in = 0 if target < spot else 1
    reserves = transition.reserves_of(state)

    def gap(amount):
        new, _, _ = transition.swap(state, SwapInput(amount, token_in))
        return math.log(_spot(new) / target)

    hi = float(reserves[token_in])
    for _ in range(MAX_BRACKET_DOUBLINGS):
        if (gap(hi) < 0) == (token_in == 0):
            break
        hi *= 2
    else:
        raise NewtonNonConvergence(f"could not bracket a swap reaching price {target}")
    amount = brentq(gap, 0.0, hi, xtol=1e-15 * hi, rtol=1e-15, maxiter=500)
    return amount, token_in


def arbitrage_swap(state, target_price: float):
    """Return ``(amount_in, token_in)`` for the swap that lands spot on ``target_price``."""
    if target_price <= 0 or not math.isfinite(target_price):
        raise ValueError(f"target price must be positive and finite, got {target_price}")
    if target_price == _spot(state):
        return 0.0, 0
    if isinstance(state, V2State):
        return _constant_product_arbitrage(state, target_price)
    if isinstance(state, V3State):
        return _constant_product_arbitrage(as_v2(state), target_price)
    if isinstance(state, (BalancerState, StableswapState)):
        return _root_find_arbitrage(state, target_price)
    raise UnsupportedProtocol(f"unknown protocol state {type(state).__name__}")


def drive_to_price(twin, target_price: float):
    """Apply the arbitrage swap to ``twin`` in place. Returns ``(amount_in, token_in)``."""
    amount, token_in = arbitrage_swap(twin.state, target_price)
    if amount > 0:
        twin.apply(SwapInput(amount, token_in, ArithmeticMode.REAL))
    return amount, token_in


def pair_arbitrage(state: StableswapState, i: int, j: int, target: float):
    """Swap between assets ``i`` and ``j`` that sets their marginal price to ``target``.

    Returns ``(amount_in, token_in, token_out)``; other reserves are untouched.
    """
    price = stableswap.spot_price(state, i, j)
    if price == target:
        return 0.0, i, j
    # selling i lowers the price of i in units of j
    src, dst = (i, j) if price > target else (j, i)
    goal = target if src == i else 1 / target

    def gap(amount):
        new, _, _ = stableswap.swap(state, SwapInput(amount, src, token_out=dst))
        return math.log(stableswap.spot_price(new, src, dst) / goal)

    hi = float(state.reserves[src])
    for _ in range(MAX_BRACKET_DOUBLINGS):
        if gap(hi) < 0:
            break
        hi *= 2
    else:
        raise NewtonNonConvergence(f"could not bracket a swap reaching price {target}")
    amount = brentq(gap, 0.0, hi, xtol=1e-15 * hi, rtol=1e-15, maxiter=500)
    return amount, src, dst


def marginal_price(state, token_in: int, token_out: int) -> float:
    """Fee-free price of ``token_in`` quoted in ``token_out``."""
    if isinstance(state, StableswapState):
        return stableswap.spot_price(state, token_in, token_out)
    spot = _spot(state)
    return spot if token_in == 0 else 1 / spot
