import dataclasses
import random
from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from statetwin.engine.types import ArithmeticMode, SwapInput, V2State
from statetwin.errors import DrainedReserve, InexactSnapshot, InvalidState, UnsupportedInput
from statetwin.providers.mock import RECIPES
from statetwin.twin import (
    BalancerPoolSnapshot,
    ChainContext,
    StableswapPoolSnapshot,
    StateTwinBuilder,
    V2PoolSnapshot,
    V3PoolSnapshot,
    build,
    clone,
    snapshot_from_json,
    snapshot_of,
    snapshot_to_json,
)

DISC = ArithmeticMode.DISCRETIZED


def test_build_v2_spot():
    twin = build(V2PoolSnapshot(pool_id="p", reserve0=1000, reserve1=100000))
    assert twin.observe().spot_price == 100


@pytest.mark.parametrize("name", list(RECIPES))
def test_t1_build_equality(name):
    snap = RECIPES[name]
    state = build(snap).state
    if isinstance(snap, V2PoolSnapshot):
        assert (state.reserve0, state.reserve1, state.fee) == (snap.reserve0, snap.reserve1, snap.fee)
    elif isinstance(snap, V3PoolSnapshot):
        assert (state.sqrt_price, state.liquidity, state.tick_lower, state.tick_upper) == (
            snap.sqrt_price, snap.liquidity, snap.lwr_tick, snap.upr_tick)
        assert state.current_tick == snap.current_tick
    elif isinstance(snap, BalancerPoolSnapshot):
        assert (state.reserve0, state.reserve1, state.weight0, state.weight1) == (
            snap.reserve0, snap.reserve1, snap.weight0, snap.weight1)
    else:
        assert state.reserves == snap.reserves and state.amplification == snap.amplification


def test_t1_discretized_decimal_adjustment():
    snap = V2PoolSnapshot(pool_id="p", reserve0=Decimal("33503812.567123"),
                          reserve1=Decimal("20940.132850044781069044"), fee=0, decimals=(6, 18))
    state = build(snap, DISC).state
    assert (state.reserve0, state.reserve1) == (33_503_812_567_123, 20_940_132_850_044_781_069_044)


def test_inexact_discretized_snapshot_is_rejected():
    with pytest.raises(InexactSnapshot):
        build(V2PoolSnapshot(pool_id="p", reserve0=0.1, reserve1=1, fee=0), DISC)
    with pytest.raises(UnsupportedInput):
        build(RECIPES["usdc_weth_v3"], DISC)


def test_v3_price_outside_ticks_fails_at_build():
    snap = dataclasses.replace(RECIPES["usdc_weth_v3"], sqrt_price=1.0)
    with pytest.raises(InvalidState):
        build(snap)


def test_snapshots_are_immutable():
    with pytest.raises(dataclasses.FrozenInstanceError):
        RECIPES["eth_dai_v2"].reserve0 = 1


def test_twins_from_one_snapshot_are_independent():
    snap = RECIPES["eth_dai_v2"]
    a, b = build(snap), build(snap)
    a.swap(10.0)
    assert b.state == build(snap).state != a.state


def _random_action(rng, twin):
    token = rng.randint(0, 1)
    reserves = (twin.state.reserve0, twin.state.reserve1) if hasattr(twin.state, "reserve0") else None
    if reserves is None:
        return rng.uniform(0.1, 5.0), token
    return reserves[token] * rng.uniform(1e-6, 0.2), token


@pytest.mark.parametrize("name", ["eth_dai_v2", "eth_dai_balancer", "stable_a10", "usdc_weth_v3"])
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_t4_clone_independence(name, seed):
    rng = random.Random(seed)
    twin = build(RECIPES[name])
    before = twin.state_hash()
    forks = [twin.clone()]
    for _ in range(8):
        fork = rng.choice(forks)
        if rng.random() < 0.3:
            forks.append(clone(fork))
            continue
        amount, token = _random_action(rng, fork)
        try:
            fork.swap(amount, token)
        except Exception:
            pass
    assert twin.state_hash() == before
    assert twin.transitions == 0


def test_clone_of_clone_and_many_forks():
    twin = build(RECIPES["eth_dai_v2"])
    a = twin.clone()
    b = a.clone()
    a.swap(1.0)
    b.swap(2.0)
    assert len({twin.state, a.state, b.state}) == 3
    forks = [twin.clone() for _ in range(50)]
    for i, fork in enumerate(forks):
        fork.swap(0.5 + i)
    assert len({f.state for f in forks}) == 50
    assert twin.state == build(RECIPES["eth_dai_v2"]).state


@settings(max_examples=50, deadline=None)
@given(amounts=st.lists(st.floats(1e-3, 100.0), min_size=1, max_size=10))
def test_t3_determinism(amounts):
    a, b = build(RECIPES["stable_a10"]), build(RECIPES["stable_a10"])
    for x in amounts:
        assert a.swap(x) == b.swap(x)
    assert a.state == b.state and a.state_hash() == b.state_hash()


def test_t2_equal_snapshots_give_equal_observables():
    snap = RECIPES["usdc_weth_v3"]
    copy_snap = snapshot_from_json(snapshot_to_json(snap))
    assert build(snap).observe() == build(copy_snap).observe()


def test_apply_example_and_atomic_failure():
    twin = build(V2PoolSnapshot(pool_id="p", reserve0=1000, reserve1=100000, fee=0))
    twin.apply(SwapInput(100.0))
    assert twin.state.reserve0 == 1100
    assert twin.state.reserve1 == pytest.approx(90909.0909090909, rel=1e-15)

    disc = build(V2PoolSnapshot(pool_id="p", reserve0=10, reserve1=10, fee=0), DISC)
    before = disc.state_hash()
    with pytest.raises(DrainedReserve):
        disc.swap(10**6)
    assert disc.state_hash() == before and disc.transitions == 0


def test_observe_conventions():
    v3 = build(RECIPES["usdc_weth_v3"])
    assert v3.observe().spot_price == pytest.approx(0.02**2, rel=1e-15)
    bal = build(BalancerPoolSnapshot(pool_id="b", reserve0=300, reserve1=5000, weight0=0.7, weight1=0.3))
    assert bal.observe().spot_price == pytest.approx((5000 / 0.3) / (300 / 0.7), rel=1e-15)


def test_snapshot_of_round_trips():
    twin = build(RECIPES["eth_dai_v2"])
    assert snapshot_of(twin) is RECIPES["eth_dai_v2"]
    twin.swap(10.0)
    after = snapshot_of(twin)
    assert after.context.derived
    assert (after.reserve0, after.reserve1) == (twin.state.reserve0, twin.state.reserve1)
    rebuilt = build(after)
    assert rebuilt.state == twin.state
    assert snapshot_of(rebuilt) is after


def test_snapshot_of_discretized_restores_whole_units():
    snap = V2PoolSnapshot(pool_id="p", reserve0=Decimal("1.5"), reserve1=Decimal("2000"), fee=0, decimals=(6, 6))
    twin = build(snap, DISC)
    twin.swap(250_000)
    after = snapshot_of(twin)
    assert after.reserve0 == Decimal("1.75")
    assert build(after, DISC).state == twin.state


@pytest.mark.parametrize("snap", [
    *RECIPES.values(),
    V2PoolSnapshot(pool_id="x", reserve0=10**24, reserve1=Fraction(7, 3), fee=Fraction(3, 1000),
                   context=ChainContext(block_number=18_000_000, timestamp=1, chain_id=1), decimals=(18, 6)),
    StableswapPoolSnapshot(pool_id="s3", reserves=(Decimal("1.25"), 2, 3.5), amplification=100),
])
def test_json_round_trip(snap):
    text = snapshot_to_json(snap)
    assert snapshot_from_json(text) == snap
    assert snapshot_to_json(snapshot_from_json(text)) == text


def test_json_integers_are_decimal_strings():
    snap = V2PoolSnapshot(pool_id="x", reserve0=10**24, reserve1=5, fee=0)
    assert '"reserve0": "1000000000000000000000000"' in snapshot_to_json(snap)
    assert '"protocol": "v2"' in snapshot_to_json(snap)


def test_builder_carries_mode():
    builder = StateTwinBuilder(ArithmeticMode.REAL, exact=True)
    twin = builder.build(V2PoolSnapshot(pool_id="p", reserve0=3, reserve1=7, fee=0))
    assert isinstance(twin.state.reserve0, Fraction)
    assert isinstance(twin.state, V2State)


def test_negative_block_rejected():
    with pytest.raises(InvalidState):
        ChainContext(block_number=-1)
