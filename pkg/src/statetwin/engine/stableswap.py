"""Amplified stableswap invariant.

The invariant D is defined implicitly by

    A * n**n * sum(r) + D = A * n**n * D + D**(n+1) / (n**n * prod(r))

and recovered by Newton iteration from D0 = sum(r). Swaps hold D fixed and
solve the quadratic in the output reserve, again by Newton. The fee is taken
from the output leg and left in the pool, so it shows up as growth in D.

Real mode runs in floats; Discretized mode runs in integers with floor
division and converges to within one minimal unit.
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

from statetwin.engine.types import (
    ArithmeticMode,
    InvariantDrift,
    Observation,
    StableswapState,
    SwapInput,
)
from statetwin.errors import (
    DrainedReserve,
    EmptyPool,
    NewtonNonConvergence,
    NonPositiveAmount,
    UnsupportedInput,
)

MAX_ITERATIONS = 255
REAL_TOL = 1e-12


def _ann(amplification, n):
    return amplification * n**n


def _as_ratio(value):
    frac = Fraction(value)
    return frac.numerator, frac.denominator


def _is_discretized(reserves) -> bool:
    return all(isinstance(r, int) for r in reserves)


def compute_d(reserves, amplification, *, return_iterations: bool = False):
    """Solve the invariant for D. Integer reserves select the discretized solver."""
    reserves = tuple(reserves)
    n = len(reserves)
    s = sum(reserves)
    if s == 0:
        return (0, 0) if return_iterations else 0
    if any(r == 0 for r in reserves):
        raise EmptyPool("stableswap D is undefined with an empty reserve")
    if all(r == reserves[0] for r in reserves):
        # Balanced pools solve the invariant exactly at D = n * r.
        return (s, 0) if return_iterations else s
    if _is_discretized(reserves):
        d, it = _compute_d_int(reserves, amplification, n, s)
    else:
        d, it = _compute_d_real([float(r) for r in reserves], float(amplification), n, float(s))
    return (d, it) if return_iterations else d


def _compute_d_real(reserves, amplification, n, s):
    ann = _ann(amplification, n)
    d = s
    for i in range(MAX_ITERATIONS):
        d_p = d
        for r in reserves:
            d_p = d_p * d / (n * r)
        d_prev = d
        d = (ann * s + n * d_p) * d / ((ann - 1) * d + (n + 1) * d_p)
        if abs(d - d_prev) <= REAL_TOL * d:
            return d, i + 1
    raise NewtonNonConvergence(f"D did not converge in {MAX_ITERATIONS} iterations")


def _compute_d_int(reserves, amplification, n, s):
    a_num, a_den = _as_ratio(amplification)
    a_num *= n**n
    d = s
    for i in range(MAX_ITERATIONS):
        d_p = d
        for r in reserves:
            d_p = d_p * d // (n * r)
        d_prev = d
        d = (a_num * s + n * a_den * d_p) * d // ((a_num - a_den) * d + (n + 1) * a_den * d_p)
        if abs(d - d_prev) <= 1:
            return d, i + 1
    raise NewtonNonConvergence(f"D did not converge in {MAX_ITERATIONS} iterations")


def residual(reserves, amplification, d) -> float:
    """Signed residual of the invariant equation, evaluated exactly in rationals."""
    n = len(reserves)
    rs = [Fraction(r) for r in reserves]
    d = Fraction(d)
    ann = Fraction(amplification) * n**n
    prod = Fraction(1)
    for r in rs:
        prod *= r
    lhs = ann * sum(rs) + d
    rhs = ann * d + d ** (n + 1) / (n**n * prod)
    return float(lhs - rhs)


def solve_y(reserves, j: int, d, amplification):
    """Reserve of asset ``j`` that restores invariant ``d`` given the other reserves."""
    reserves = tuple(reserves)
    n = len(reserves)
    others = [r for k, r in enumerate(reserves) if k != j]
    if _is_discretized(reserves) and isinstance(d, int):
        return _solve_y_int(others, n, d, amplification)
    return _solve_y_real([float(r) for r in others], n, float(d), float(amplification))


def _solve_y_real(others, n, d, amplification):
    ann = _ann(amplification, n)
    c = d
    for x in others:
        c = c * d / (n * x)
    c = c * d / (n * ann)
    b = sum(others) + d / ann
    y = d
    for _ in range(MAX_ITERATIONS):
        y_prev = y
        y = (y * y + c) / (2 * y + b - d)
        if abs(y - y_prev) <= REAL_TOL * y:
            return y
    raise NewtonNonConvergence(f"y did not converge in {MAX_ITERATIONS} iterations")


def _solve_y_int(others, n, d, amplification):
    a_num, a_den = _as_ratio(amplification)
    a_num *= n**n
    c = d
    for x in others:
        c = c * d // (n * x)
    c = c * d * a_den // (n * a_num)
    b = sum(others) + d * a_den // a_num
    y = d
    for _ in range(MAX_ITERATIONS):
        y_prev = y
        y = (y * y + c) // (2 * y + b - d)
        if abs(y - y_prev) <= 1:
            return y
    raise NewtonNonConvergence(f"y did not converge in {MAX_ITERATIONS} iterations")


def _token_out(state: StableswapState, swap_input: SwapInput) -> int:
    token_out = swap_input.token_out
    if token_out is None:
        if state.n_assets != 2:
            raise UnsupportedInput("token_out is required for pools with more than two assets")
        token_out = 1 - swap_input.token_in
    if token_out == swap_input.token_in or not 0 <= token_out < state.n_assets:
        raise UnsupportedInput(f"invalid token_out {token_out}")
    return token_out


def swap(state: StableswapState, swap_input: SwapInput):
    i = swap_input.token_in
    if swap_input.amount_in < 0:
        raise NonPositiveAmount(f"amount_in must be nonnegative, got {swap_input.amount_in}")
    if not 0 <= i < state.n_assets:
        raise UnsupportedInput(f"token_in {i} invalid for a {state.n_assets}-asset pool")
    j = _token_out(state, swap_input)
    if state.empty:
        raise EmptyPool("pool has an empty reserve")
    if swap_input.amount_in == 0:
        return state, 0, InvariantDrift()

    discretized = swap_input.mode is ArithmeticMode.DISCRETIZED
    if discretized and not (_is_discretized(state.reserves) and isinstance(swap_input.amount_in, int)):
        raise UnsupportedInput("discretized swaps need integer reserves and amounts")
    reserves = state.reserves if discretized else tuple(float(r) for r in state.reserves)

    d = compute_d(reserves, state.amplification)
    moved = list(reserves)
    moved[i] = reserves[i] + swap_input.amount_in
    y = solve_y(moved, j, d, state.amplification)
    gross = reserves[j] - y
    if discretized:
        fee_num, fee_den = _as_ratio(state.fee)
        out = gross - gross * fee_num // fee_den
    else:
        out = gross * (1 - state.fee) if state.fee else gross
    if out < 0:
        out = 0
    new_rj = reserves[j] - out
    if new_rj <= 0:
        raise DrainedReserve(f"output {out} would drain reserve {reserves[j]}")
    moved[j] = new_rj
    new = replace(state, reserves=tuple(moved))

    d_after = compute_d(moved, state.amplification)
    if discretized:
        drift = InvariantDrift(
            fee_accrual=max(d_after - d, 0), rounding_slack=max(d - d_after, 0)
        )
    else:
        drift = InvariantDrift(fee_accrual=max(d_after - d, 0.0) if state.fee else 0.0)
    return new, out, drift


def spot_price(state: StableswapState, i: int = 0, j: int = 1) -> float:
    """Marginal price of asset ``i`` in units of asset ``j`` (fee-free)."""
    reserves = [float(r) for r in state.reserves]
    n = len(reserves)
    d = float(compute_d(reserves, state.amplification))
    ann = _ann(float(state.amplification), n)
    d_p = d
    for r in reserves:
        d_p = d_p * d / (n * r)
    return (ann + d_p / reserves[i]) / (ann + d_p / reserves[j])


def observe(state: StableswapState, numeraire: int = 1, lp_fraction: float = 0.0) -> Observation:
    spot = spot_price(state, 0, 1)
    tvl = sum(
        float(r) * (1.0 if k == numeraire else spot_price(state, k, numeraire))
        for k, r in enumerate(state.reserves)
    )
    return Observation(spot_price=spot, tvl=tvl, position_value=lp_fraction * tvl)
