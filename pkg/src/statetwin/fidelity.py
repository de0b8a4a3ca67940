"""Paired-trajectory check of the discretization bound for constant-product pools.

A Real twin in exact rational arithmetic and a Discretized twin (integer
minimal units, floor rounding) are built from the same integer snapshot and
fed the same random fee-free token0-in swaps. The Real invariant never
moves; the Discretized one only decreases, by less than the post-swap input
reserve per step, so after ``n`` swaps ``|K_n - K_0| <= n * B`` with ``B``
the largest input reserve seen.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from fractions import Fraction

from statetwin.engine import v2
from statetwin.engine.types import ArithmeticMode, SwapInput
from statetwin.twin import V2PoolSnapshot, build

RELATIVE_SLACK_CLAIM = 1e-8


@dataclass(frozen=True)
class TrajectoryReport:
    swaps: int
    k0: int
    k_n: int
    cumulative_drift: int
    reserve_bound: int
    bound: int
    max_step_slack: int
    step_violations: int
    real_drift: Fraction
    relative_slack: float
    max_reserve_divergence: float

    @property
    def passed(self) -> bool:
        return self.step_violations == 0 and self.cumulative_drift <= self.bound and self.real_drift == 0


@dataclass(frozen=True)
class FidelityReport:
    trajectories: int
    swaps_per_trajectory: int
    seed: int
    max_step_slack: int
    max_cumulative_drift: int
    max_bound: int
    step_violations: int
    bound_violations: int
    max_relative_slack: float
    max_reserve_divergence: float
    max_real_drift: float
    relative_slack_ok: bool

    @property
    def passed(self) -> bool:
        return self.step_violations == 0 and self.bound_violations == 0 and self.max_real_drift == 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["status"] = "PASS" if self.passed else "FAIL"
        return out


def run_trajectory(reserve0: int, reserve1: int, amounts) -> TrajectoryReport:
    snapshot = V2PoolSnapshot(pool_id="fidelity", reserve0=reserve0, reserve1=reserve1, fee=0)
    real = build(snapshot, ArithmeticMode.REAL, exact=True)
    disc = build(snapshot, ArithmeticMode.DISCRETIZED)
    k0 = reserve0 * reserve1
    bound_b = 0
    max_slack = 0
    violations = 0
    divergence = 0.0
    steps = 0
    for amount in amounts:
        real.apply(SwapInput(Fraction(amount), 0, ArithmeticMode.REAL))
        receipt = disc.apply(SwapInput(int(amount), 0, ArithmeticMode.DISCRETIZED))
        slack = receipt.drift.rounding_slack
        r_bound = receipt.drift.reserve_bound_used
        if not 0 <= slack <= r_bound:
            violations += 1
        max_slack = max(max_slack, slack)
        bound_b = max(bound_b, disc.state.reserve0)
        exact_r1 = real.state.reserve1
        divergence = max(divergence, float(abs(disc.state.reserve1 - exact_r1) / exact_r1))
        steps += 1
    k_n = v2.invariant(disc.state)
    drift = abs(k_n - k0)
    return TrajectoryReport(
        swaps=steps,
        k0=k0,
        k_n=k_n,
        cumulative_drift=drift,
        reserve_bound=bound_b,
        bound=steps * bound_b,
        max_step_slack=max_slack,
        step_violations=violations,
        real_drift=abs(v2.invariant(real.state) - k0),
        relative_slack=drift / k0,
        max_reserve_divergence=divergence,
    )


def random_trajectory(rng: random.Random, swaps: int, reserve_bound: int, max_swap_fraction: float):
    """Reserves within three orders of magnitude below ``reserve_bound``, swaps up to a fraction of reserve0."""
    lo = max(2, reserve_bound // 1000)
    r0 = rng.randint(lo, reserve_bound)
    r1 = rng.randint(lo, reserve_bound)
    amounts = []
    cur0 = r0
    for _ in range(swaps):
        d = rng.randint(1, max(1, int(cur0 * max_swap_fraction)))
        amounts.append(d)
        cur0 += d
    return r0, r1, amounts


def run_fidelity(
    swaps: int = 100,
    seed: int = 42,
    reserve_bound: int = 10**18,
    trajectories: int = 1,
    max_swap_fraction: float = 0.05,
) -> FidelityReport:
    rng = random.Random(seed)
    reports = []
    trajectories = max(trajectories, 1)
    for _ in range(trajectories):
        r0, r1, amounts = random_trajectory(rng, swaps, reserve_bound, max_swap_fraction)
        reports.append(run_trajectory(r0, r1, amounts))
    max_rel = max(r.relative_slack for r in reports)
    return FidelityReport(
        trajectories=trajectories,
        swaps_per_trajectory=swaps,
        seed=seed,
        max_step_slack=max(r.max_step_slack for r in reports),
        max_cumulative_drift=max(r.cumulative_drift for r in reports),
        max_bound=max(r.bound for r in reports),
        step_violations=sum(r.step_violations for r in reports),
        bound_violations=sum(r.cumulative_drift > r.bound for r in reports),
        max_relative_slack=max_rel,
        max_reserve_divergence=max(r.max_reserve_divergence for r in reports),
        max_real_drift=float(max(r.real_drift for r in reports)),
        relative_slack_ok=max_rel <= RELATIVE_SLACK_CLAIM,
    )
