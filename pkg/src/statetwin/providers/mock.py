"""Synthetic snapshot recipes.

The V2 and Balancer recipes use the 1000 ETH / 100000 DAI basket. The V3
and stableswap parameters are synthetic choices, not taken from any chain.
"""

from __future__ import annotations

from statetwin.engine.types import tick_at_sqrt_price
from statetwin.errors import UnknownRecipe
from statetwin.twin import (
    BalancerPoolSnapshot,
    PoolSnapshot,
    StableswapPoolSnapshot,
    StateTwinProvider,
    V2PoolSnapshot,
    V3PoolSnapshot,
)

# ETH at 2500 USDC, quoted as WETH per USDC; +-30% stays inside the range.
_V3_SQRT_PRICE = 0.02

RECIPES: dict = {
    "eth_dai_v2": V2PoolSnapshot(
        pool_id="eth_dai_v2",
        token0_name="ETH",
        token1_name="DAI",
        reserve0=1000.0,
        reserve1=100000.0,
        fee=0.003,
    ),
    "usdc_weth_v3": V3PoolSnapshot(
        pool_id="usdc_weth_v3",
        token0_name="USDC",
        token1_name="WETH",
        sqrt_price=_V3_SQRT_PRICE,
        liquidity=1_000_000.0,
        current_tick=tick_at_sqrt_price(_V3_SQRT_PRICE),
        lwr_tick=-84240,
        upr_tick=-72240,
        fee=0.0005,
    ),
    "eth_dai_balancer": BalancerPoolSnapshot(
        pool_id="eth_dai_balancer",
        token0_name="ETH",
        token1_name="DAI",
        reserve0=1000.0,
        reserve1=100000.0,
        weight0=0.5,
        weight1=0.5,
        fee=0.0025,
    ),
    "stable_a10": StableswapPoolSnapshot(
        pool_id="stable_a10",
        token0_name="USDC",
        token1_name="DAI",
        reserves=(1_000_000.0, 1_000_000.0),
        amplification=10.0,
        fee=0.0004,
    ),
}


class MockProvider(StateTwinProvider):
    """Serves the built-in recipes. Snapshots carry no chain context."""

    def recipes(self) -> list:
        return list(RECIPES)

    def snapshot(self, pool_id: str, **kwargs) -> PoolSnapshot:
        try:
            return RECIPES[pool_id]
        except KeyError:
            raise UnknownRecipe(
                f"unknown recipe {pool_id!r}; available: {', '.join(RECIPES)}"
            ) from None
