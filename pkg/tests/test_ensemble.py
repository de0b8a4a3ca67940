import time

import pytest

from statetwin.ensemble import aggregate, fork_and_evaluate, sweep_from_provider
from statetwin.errors import NoSuccessfulScenarios, UnsupportedInput
from statetwin.primitives import SimulatePriceMove
from statetwin.primitives.results import PriceMoveScenario
from statetwin.twin import build

GRID = [-0.30, -0.20, -0.10, 0.0, 0.10, 0.20, 0.30]


def test_seven_scenarios_over_v3_in_order(twin_of):
    twin = twin_of("usdc_weth_v3")
    before = twin.state_hash()
    sweep = fork_and_evaluate(twin, GRID, SimulatePriceMove())
    assert len(sweep.results) == 7
    assert all(isinstance(r.result, PriceMoveScenario) for r in sweep.results)
    assert [r.scenario for r in sweep.results] == GRID
    assert [r.result.price_change_pct for r in sweep.results] == GRID
    assert twin.state_hash() == before


def test_single_scenario_equals_direct_call(twin_of):
    twin = twin_of("usdc_weth_v3")
    sweep = fork_and_evaluate(twin, [0.0], "simulate_price_move")
    assert sweep.results[0].result == SimulatePriceMove().apply(twin, price_change_pct=0.0)


def test_serial_and_parallel_are_bit_identical(twin_of):
    twin = twin_of("usdc_weth_v3")
    grid = [-0.3 + 0.6 * i / 49 for i in range(50)]
    serial = fork_and_evaluate(twin, grid, "simulate_price_move", parallel=False)
    parallel = fork_and_evaluate(twin, grid, "simulate_price_move", workers=8)
    assert [r.result for r in serial.results] == [r.result for r in parallel.results]
    assert [repr(r.result) for r in serial.results] == [repr(r.result) for r in parallel.results]


def test_failures_are_isolated(twin_of):
    twin = twin_of("eth_dai_v2")
    sweep = fork_and_evaluate(twin, [0.1, -2.0, 0.2], "simulate_price_move")
    assert [r.ok for r in sweep.results] == [True, False, True]
    assert "FractionOutOfRange" in sweep.results[1].error
    stats = aggregate(sweep, "price_change_pct")
    assert stats["count"] == 2 and stats["failed"] == 1


def test_dict_scenarios_and_fixed_args(twin_of):
    twin = twin_of("eth_dai_v2")
    sweep = fork_and_evaluate(twin, [{"amount_in": 1.0}, {"amount_in": 10.0}], "calculate_slippage", token_in=0)
    assert sweep.results[0].result.slippage_pct < sweep.results[1].result.slippage_pct


def test_grid_validation(twin_of):
    with pytest.raises(UnsupportedInput):
        fork_and_evaluate(twin_of("eth_dai_v2"), [], "simulate_price_move")
    with pytest.raises(UnsupportedInput):
        fork_and_evaluate(twin_of("eth_dai_v2"), [0.1, float("inf")], "simulate_price_move")


def test_one_snapshot_per_sweep(counting_provider):
    sweep = sweep_from_provider(counting_provider, "usdc_weth_v3", [i / 100 for i in range(-25, 25)],
                                "simulate_price_move")
    assert counting_provider.calls == 1
    assert len(sweep.results) == 50 and sweep.failed == 0


def test_fifty_scenarios_under_a_second(twin_of):
    twin = twin_of("usdc_weth_v3")
    start = time.perf_counter()
    sweep = fork_and_evaluate(twin, [i / 100 for i in range(-25, 25)], "simulate_price_move")
    assert time.perf_counter() - start < 1.0
    assert sweep.wall_clock_ms < 1000


def _sweep_with(values, twin_of):
    # a sweep whose field values are exactly the given numbers
    return fork_and_evaluate(twin_of("eth_dai_v2"), values, "simulate_price_move", parallel=False)


def test_aggregate_conventions(twin_of):
    constant = fork_and_evaluate(twin_of("eth_dai_v2"), [0.1] * 5, "simulate_price_move")
    stats = aggregate(constant, "il_percentage")
    assert stats["min"] == stats["max"] == stats["mean"] == stats["median"]

    pair = aggregate(_sweep_with([0.1, 0.2], twin_of), "price_change_pct")
    assert (pair["q05"], pair["q95"]) == (pair["min"], pair["max"]) == (0.1, 0.2)

    # position value is monotone in the move, so a symmetric grid's median is the pct = 0 value
    symmetric = fork_and_evaluate(twin_of("eth_dai_v2"), GRID, "simulate_price_move")
    stats = aggregate(symmetric, "position_value_after")
    assert stats["median"] == symmetric.results[3].result.position_value_after

    ranks = aggregate(_sweep_with([i / 100 for i in range(1, 21)], twin_of), "price_change_pct")
    assert (ranks["q05"], ranks["median"], ranks["q95"]) == (0.01, 0.10, 0.19)


def test_aggregate_needs_a_success(twin_of):
    sweep = fork_and_evaluate(twin_of("eth_dai_v2"), [-5.0, -3.0], "simulate_price_move")
    with pytest.raises(NoSuccessfulScenarios):
        aggregate(sweep, "il_percentage")


def test_sweep_serialises(twin_of):
    sweep = fork_and_evaluate(twin_of("stable_a10"), [0.001, 0.01], "assess_depeg_risk", arg_name="depeg_epsilon")
    data = sweep.to_dict("lp_loss_delta")
    assert data["aggregate"]["count"] == 2
    assert data["results"][1]["result"]["depeg_epsilon"] == 0.01


def test_forks_are_independent_of_source_mutation(mock):
    twin = build(mock.snapshot("eth_dai_v2"))
    first = fork_and_evaluate(twin, GRID, "simulate_price_move")
    twin.swap(50.0)
    second = fork_and_evaluate(build(mock.snapshot("eth_dai_v2")), GRID, "simulate_price_move")
    assert [r.result for r in first.results] == [r.result for r in second.results]
