"""Constant-product (Uniswap V2) transitions and observations.

Two swap rules live here. ``swap_real`` is the closed-form real-valued
update, and works unchanged on floats or Fractions. ``swap_discretized`` is
the fee-free integer rule with floor rounding on the output leg, for which
the product can only fall, and by less than the post-swap input reserve.
"""

from __future__ import annotations

from dataclasses import replace

from statetwin.engine.types import (
    ExitInput,
    InvariantDrift,
    JoinInput,
    Observation,
    SwapInput,
    V2State,
)
from statetwin.errors import (
    DrainedReserve,
    EmptyPool,
    NonPositiveAmount,
    NonProportionalDeposit,
    UnsupportedInput,
)

PROPORTIONAL_TOL = 1e-12


def invariant(state: V2State):
    return state.reserve0 * state.reserve1


def _check_swap(state: V2State, swap: SwapInput):
    if swap.amount_in < 0:
        raise NonPositiveAmount(f"amount_in must be nonnegative, got {swap.amount_in}")
    if swap.token_in not in (0, 1):
        raise UnsupportedInput(f"token_in {swap.token_in} invalid for a two-asset pool")
    if state.empty:
        raise EmptyPool("pool has an empty reserve")


def _legs(state: V2State, token_in: int):
    if token_in == 0:
        return state.reserve0, state.reserve1
    return state.reserve1, state.reserve0


def _with_legs(state: V2State, token_in: int, r_in, r_out) -> V2State:
    if token_in == 0:
        return replace(state, reserve0=r_in, reserve1=r_out)
    return replace(state, reserve0=r_out, reserve1=r_in)


def amount_out_real(r_in, r_out, amount_in, fee=0):
    """Return ``(amount_out, new_r_out)`` for a real-valued swap.

    Whichever of the two is smaller is computed directly and the other by
    subtraction, so both keep full relative precision in floating point.
    """
    net = (1 - fee) * amount_in if fee else amount_in
    denom = r_in + net
    out = net * r_out / denom
    if out <= r_out / 2:
        return out, r_out - out
    remaining = r_out * r_in / denom
    return r_out - remaining, remaining


def swap_real(state: V2State, swap: SwapInput):
    """Real-valued swap; returns ``(new_state, amount_out, drift)``."""
    _check_swap(state, swap)
    if swap.amount_in == 0:
        return state, 0, InvariantDrift()
    r_in, r_out = _legs(state, swap.token_in)
    out, new_out = amount_out_real(r_in, r_out, swap.amount_in, state.fee)
    if new_out <= 0:
        raise DrainedReserve(f"output {out} would drain reserve {r_out}")
    new = _with_legs(state, swap.token_in, r_in + swap.amount_in, new_out)
    k_before, k_after = invariant(state), invariant(new)
    accrual = k_after - k_before if state.fee else 0
    return new, out, InvariantDrift(fee_accrual=max(accrual, 0), rounding_slack=0)


def swap_discretized(state: V2State, swap: SwapInput):
    """Fee-free integer swap: new output reserve is floor(K / new input reserve)."""
    _check_swap(state, swap)
    if state.fee:
        raise UnsupportedInput("discretized swaps are fee-free; use Real mode for fee-bearing pools")
    amount = swap.amount_in
    if not isinstance(amount, int) or not all(
        isinstance(r, int) for r in (state.reserve0, state.reserve1)
    ):
        raise UnsupportedInput("discretized swaps need integer reserves and amounts")
    r_in, r_out = _legs(state, swap.token_in)
    if amount == 0:
        return state, 0, InvariantDrift(reserve_bound_used=r_in)
    k = r_in * r_out
    new_in = r_in + amount
    new_out = k // new_in
    if new_out <= 0:
        raise DrainedReserve(f"swap of {amount} would drain reserve {r_out}")
    new = _with_legs(state, swap.token_in, new_in, new_out)
    return new, r_out - new_out, InvariantDrift(
        fee_accrual=0, rounding_slack=k - new_in * new_out, reserve_bound_used=new_in
    )


def observe(state: V2State, numeraire: int = 1, lp_fraction: float = 0.0) -> Observation:
    spot = state.reserve1 / state.reserve0
    tvl = 2 * (state.reserve1 if numeraire == 1 else state.reserve0)
    return Observation(spot_price=spot, tvl=tvl, position_value=lp_fraction * tvl)


def join_pool(state: V2State, deposit: JoinInput, lp_supply):
    """Proportional mint. Returns ``(new_state, lp_minted)``."""
    if len(deposit.deposits) != 2:
        raise UnsupportedInput("V2 join takes exactly two deposit amounts")
    if state.empty:
        raise EmptyPool("cannot join an emptied pool")
    d0, d1 = deposit.deposits
    share0, share1 = d0 / state.reserve0, d1 / state.reserve1
    if abs(share0 - share1) > PROPORTIONAL_TOL * max(share0, share1):
        raise NonProportionalDeposit(
            f"deposit ratio {share0} vs {share1} does not match pool; use an optimal deposit split"
        )
    new = replace(state, reserve0=state.reserve0 + d0, reserve1=state.reserve1 + d1)
    return new, lp_supply * share0


def exit_pool(state: V2State, withdrawal: ExitInput):
    """Proportional burn. Returns ``(new_state, (out0, out1))``."""
    if state.empty:
        raise EmptyPool("cannot exit an emptied pool")
    f = withdrawal.lp_fraction
    if f == 1:
        out0, out1 = state.reserve0, state.reserve1
    else:
        out0, out1 = f * state.reserve0, f * state.reserve1
    new = replace(state, reserve0=state.reserve0 - out0, reserve1=state.reserve1 - out1)
    return new, (out0, out1)
