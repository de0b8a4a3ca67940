import random

from statetwin.fidelity import RELATIVE_SLACK_CLAIM, random_trajectory, run_fidelity, run_trajectory


def test_default_run_passes():
    report = run_fidelity(swaps=100, seed=42, reserve_bound=10**18)
    assert report.passed
    assert report.max_cumulative_drift <= report.max_bound
    assert report.to_dict()["status"] == "PASS"


def test_zero_swaps_has_no_slack():
    report = run_fidelity(swaps=0, seed=1)
    assert report.max_step_slack == 0 and report.max_cumulative_drift == 0 and report.passed


def test_trajectory_bookkeeping():
    r = run_trajectory(1000, 100000, [100])
    assert (r.k0, r.k_n, r.cumulative_drift, r.bound) == (100_000_000, 99_999_900, 100, 1100)
    assert r.real_drift == 0 and r.passed


def test_mainnet_scale_relative_slack():
    report = run_fidelity(swaps=100, seed=7, reserve_bound=10**24, trajectories=20)
    assert report.passed
    assert report.max_relative_slack <= RELATIVE_SLACK_CLAIM
    assert report.relative_slack_ok
    assert report.max_reserve_divergence < 1e-9


def test_reproducible():
    assert run_fidelity(swaps=30, seed=3, trajectories=3) == run_fidelity(swaps=30, seed=3, trajectories=3)
    a = random_trajectory(random.Random(5), 10, 10**6, 0.05)
    b = random_trajectory(random.Random(5), 10, 10**6, 0.05)
    assert a == b
