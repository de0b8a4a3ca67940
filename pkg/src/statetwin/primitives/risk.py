"""Stableswap depeg risk: LP value lost when one asset's external price slips."""

from __future__ import annotations

import itertools
import math

from statetwin.engine import stableswap
from statetwin.engine.types import ArithmeticMode, StableswapState, SwapInput
from statetwin.errors import EpsilonOutOfRange, NewtonNonConvergence, UnsupportedProtocol
from statetwin.primitives.base import Primitive
from statetwin.primitives.market import pair_arbitrage
from statetwin.primitives.results import DepegRisk

MAX_ROUNDS = 100
PRICE_TOL = 1e-12


class AssessDepegRisk(Primitive):
    """Arbitrage a stableswap fork to asset 0 trading at ``1 - epsilon`` and measure LP loss.

    ``lp_loss_delta = 1 - V_after / V_before`` where both baskets are valued
    at the post-depeg external prices (asset 0 at ``1 - epsilon``, the rest at
    1). Pools with more than two assets are arbitraged pair by pair in
    round-robin until every marginal price matches its external ratio.
    """

    name = "assess_depeg_risk"

    def apply(self, twin, depeg_epsilon=0.0) -> DepegRisk:
        eps = depeg_epsilon
        if not isinstance(twin.state, StableswapState):
            raise UnsupportedProtocol("assess_depeg_risk needs a stableswap twin")
        if not (math.isfinite(eps) and 0 <= eps < 1):
            raise EpsilonOutOfRange(f"depeg_epsilon must be in [0, 1), got {eps}")
        n = twin.state.n_assets
        prices = [1 - eps] + [1.0] * (n - 1)
        before = [float(r) for r in twin.state.reserves]
        value_before = math.fsum(r * p for r, p in zip(before, prices))
        fork = twin.clone()
        fork.mode = ArithmeticMode.REAL
        sold = 0.0
        if eps > 0:
            sold = self._arbitrage(fork, prices)
        after = [float(r) for r in fork.state.reserves]
        value_after = math.fsum(r * p for r, p in zip(after, prices))
        return DepegRisk(
            depeg_epsilon=eps,
            lp_loss_delta=1 - value_after / value_before,
            value_before=value_before,
            value_after=value_after,
            arbitrage_amount_in=sold,
        )

    @staticmethod
    def _arbitrage(fork, prices) -> float:
        n = len(prices)
        sold = 0.0
        pairs = [(0, 1)] if n == 2 else list(itertools.combinations(range(n), 2))
        for _ in range(MAX_ROUNDS):
            worst = 0.0
            for i, j in pairs:
                target = prices[i] / prices[j]
                gap = abs(math.log(stableswap.spot_price(fork.state, i, j) / target))
                worst = max(worst, gap)
                if gap <= PRICE_TOL:
                    continue
                amount, src, dst = pair_arbitrage(fork.state, i, j, target)
                if amount > 0:
                    fork.apply(SwapInput(amount, src, ArithmeticMode.REAL, dst))
                    if src == 0:
                        sold += amount
            if worst <= PRICE_TOL or n == 2:
                return sold
        raise NewtonNonConvergence(f"round-robin arbitrage did not settle in {MAX_ROUNDS} rounds")
