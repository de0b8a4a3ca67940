"""Protocol dispatch: the single transition map and observation map used by twins."""

from __future__ import annotations

from dataclasses import replace
from typing import Tuple

from statetwin.engine import balancer, stableswap, v2, v3
from statetwin.engine.types import (
    ArithmeticMode,
    BalancerState,
    ExitInput,
    JoinInput,
    Observation,
    ProtocolState,
    StableswapState,
    SwapInput,
    TransitionReceipt,
    V2State,
    V3State,
)
from statetwin.errors import (
    EmptyPool,
    NonProportionalDeposit,
    UnsupportedInput,
    UnsupportedProtocol,
)

PROTOCOL_TAGS = {
    V2State: "v2",
    V3State: "v3",
    BalancerState: "balancer",
    StableswapState: "stableswap",
}


def protocol_of(state: ProtocolState) -> str:
    try:
        return PROTOCOL_TAGS[type(state)]
    except KeyError:
        raise UnsupportedProtocol(f"unknown protocol state {type(state).__name__}") from None


def reserves_of(state: ProtocolState) -> tuple:
    if isinstance(state, (V2State, BalancerState)):
        return (state.reserve0, state.reserve1)
    if isinstance(state, StableswapState):
        return state.reserves
    if isinstance(state, V3State):
        return v3.virtual_reserves(state)
    raise UnsupportedProtocol(f"unknown protocol state {type(state).__name__}")


def _with_reserves(state, reserves):
    if isinstance(state, StableswapState):
        return replace(state, reserves=tuple(reserves))
    return replace(state, reserve0=reserves[0], reserve1=reserves[1])


def invariant(state: ProtocolState):
    if isinstance(state, V2State):
        return v2.invariant(state)
    if isinstance(state, V3State):
        return state.liquidity**2
    if isinstance(state, BalancerState):
        return balancer.invariant(state)
    if isinstance(state, StableswapState):
        return stableswap.compute_d(state.reserves, state.amplification)
    raise UnsupportedProtocol(f"unknown protocol state {type(state).__name__}")


def swap(state: ProtocolState, swap_input: SwapInput):
    discretized = swap_input.mode is ArithmeticMode.DISCRETIZED
    if isinstance(state, V2State):
        return (v2.swap_discretized if discretized else v2.swap_real)(state, swap_input)
    if isinstance(state, StableswapState):
        return stableswap.swap(state, swap_input)
    if discretized:
        raise UnsupportedInput(f"{protocol_of(state)} pools support Real mode only")
    if isinstance(state, V3State):
        return v3.swap_active(state, swap_input)
    if isinstance(state, BalancerState):
        return balancer.swap(state, swap_input)
    raise UnsupportedProtocol(f"unknown protocol state {type(state).__name__}")


def _proportional_join(state, deposit: JoinInput, lp_supply):
    reserves = reserves_of(state)
    if len(deposit.deposits) != len(reserves):
        raise UnsupportedInput(f"expected {len(reserves)} deposit amounts")
    if any(r == 0 for r in reserves):
        raise EmptyPool("cannot join an emptied pool")
    shares = [d / r for d, r in zip(deposit.deposits, reserves)]
    top = max(shares)
    if any(abs(s - top) > v2.PROPORTIONAL_TOL * top for s in shares):
        raise NonProportionalDeposit(f"deposit shares {shares} are not proportional to reserves")
    new = _with_reserves(state, [r + d for r, d in zip(reserves, deposit.deposits)])
    return new, lp_supply * shares[0]


def _proportional_exit(state, withdrawal: ExitInput):
    reserves = reserves_of(state)
    if any(r == 0 for r in reserves):
        raise EmptyPool("cannot exit an emptied pool")
    f = withdrawal.lp_fraction
    out = tuple(reserves) if f == 1 else tuple(f * r for r in reserves)
    return _with_reserves(state, [r - o for r, o in zip(reserves, out)]), out


def apply_transition(state: ProtocolState, action, lp_supply=1.0) -> Tuple[ProtocolState, TransitionReceipt]:
    """Advance ``state`` by one input; the state itself is never mutated."""
    if isinstance(action, SwapInput):
        new, out, drift = swap(state, action)
        return new, TransitionReceipt(amount_out=out, drift=drift)
    if isinstance(state, V3State):
        raise UnsupportedInput("V3 liquidity changes are not modelled; only active-range swaps")
    if isinstance(action, JoinInput):
        if isinstance(state, V2State):
            new, minted = v2.join_pool(state, action, lp_supply)
        else:
            new, minted = _proportional_join(state, action, lp_supply)
        return new, TransitionReceipt(lp_minted=minted)
    if isinstance(action, ExitInput):
        if isinstance(state, V2State):
            new, out = v2.exit_pool(state, action)
        else:
            new, out = _proportional_exit(state, action)
        return new, TransitionReceipt(withdrawn=tuple(out))
    raise UnsupportedInput(f"unsupported input {type(action).__name__}")


def observe(state: ProtocolState, numeraire: int = 1, lp_fraction: float = 0.0) -> Observation:
    if isinstance(state, V2State):
        return v2.observe(state, numeraire, lp_fraction)
    if isinstance(state, V3State):
        return v3.observe(state, numeraire, lp_fraction)
    if isinstance(state, BalancerState):
        return balancer.observe(state, numeraire, lp_fraction)
    if isinstance(state, StableswapState):
        return stableswap.observe(state, numeraire, lp_fraction)
    raise UnsupportedProtocol(f"unknown protocol state {type(state).__name__}")
