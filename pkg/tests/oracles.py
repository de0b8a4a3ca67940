"""Independent reference computations used as test oracles.

Each one reaches the answer by a different route than the package: brute
search, bisection in exact rationals, or root finding on the raw invariant.
"""

import math
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from statetwin.engine import v2, v3
from statetwin.engine.types import SwapInput


def d_by_bisection(reserves, amp):
    """Stableswap D by bisection in exact rationals on the invariant equation."""
    n = len(reserves)
    ann = Fraction(amp) * n**n
    prod = math.prod(Fraction(r) for r in reserves)
    s = sum(Fraction(r) for r in reserves)

    def f(d):
        return ann * s + d - ann * d - d ** (n + 1) / (n**n * prod)

    lo = Fraction(n) * Fraction(min(reserves))
    hi = s
    for _ in range(120):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if f(mid) > 0 else (lo, mid)
    return float((lo + hi) / 2)


def il_by_arbitrage(r0, r1, rho):
    """Find the token swap that moves a fee-free constant-product pool by ``rho``
    with a bracketing root finder on the invariant, then compare LP and hold value."""
    k = r0 * r1
    target = rho * r1 / r0

    def price_gap(x0):
        return (k / x0) / x0 - target

    new_r0 = brentq(price_gap, r0 * 1e-6, r0 * 1e6, xtol=1e-14 * r0, rtol=1e-15)
    new_r1 = k / new_r0
    price = new_r1 / new_r0
    return (new_r0 * price + new_r1) / (r0 * price + r1) - 1


def deposit_split_grid(r_in, r_out, fee, deposit, points=100_000):
    """Grid search over swap size for the least leftover after swap-then-join."""
    s = np.linspace(0.0, deposit, points + 2)[1:-1]
    g = 1.0 - fee
    out = g * s * r_out / (r_in + g * s)
    after_in, after_out = r_in + s, r_out - out
    held_in, held_out = deposit - s, out
    share = np.minimum(held_in / after_in, held_out / after_out)
    leftover = (held_in - share * after_in) + (held_out - share * after_out) * after_in / after_out
    best = int(np.argmin(leftover))
    return float(s[best]), float(leftover[best]), deposit / (points + 1)


def boundary_amount(state, token_in):
    """Adjacent floats ``(inside, outside)`` straddling the range exit, found by
    bisection on amounts with the post price computed through the V2 rule directly."""
    bound = state.sqrt_price_lower if token_in == 0 else state.sqrt_price_upper

    def post(amount):
        virt, _, _ = v2.swap_real(v3.as_v2(state), SwapInput(amount, token_in))
        return math.sqrt(virt.reserve1 / virt.reserve0)

    lo, hi = 0.0, 1.0
    while state.in_range(post(hi)):
        hi *= 2
    while math.nextafter(lo, hi) < hi:
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            break
        lo, hi = (mid, hi) if state.in_range(post(mid)) else (lo, mid)
    return lo, hi, post, bound
