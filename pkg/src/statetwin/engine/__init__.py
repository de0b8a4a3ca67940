"""Protocol-exact AMM math: states, transitions, observations."""

from statetwin.engine import balancer, stableswap, v2, v3
from statetwin.engine.transition import (
    apply_transition,
    invariant,
    observe,
    protocol_of,
    reserves_of,
    swap,
)
from statetwin.engine.types import (
    ArithmeticMode,
    BalancerState,
    ExitInput,
    InvariantDrift,
    JoinInput,
    Observation,
    StableswapState,
    SwapInput,
    TransitionReceipt,
    V2State,
    V3State,
    sqrt_price_at_tick,
    tick_at_sqrt_price,
)

__all__ = [
    "ArithmeticMode",
    "BalancerState",
    "ExitInput",
    "InvariantDrift",
    "JoinInput",
    "Observation",
    "StableswapState",
    "SwapInput",
    "TransitionReceipt",
    "V2State",
    "V3State",
    "apply_transition",
    "balancer",
    "invariant",
    "observe",
    "protocol_of",
    "reserves_of",
    "sqrt_price_at_tick",
    "stableswap",
    "swap",
    "tick_at_sqrt_price",
    "v2",
    "v3",
]
