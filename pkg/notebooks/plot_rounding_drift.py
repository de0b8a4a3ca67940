"""
Integer rounding against real arithmetic
========================================

Run the same trade sequence in integer and rational arithmetic and watch
the product invariant shrink only by the rounding slack.
"""

import random

import matplotlib.pyplot as plt

from statetwin.fidelity import run_fidelity, run_trajectory

##############################################################################
# A single trajectory of 100 swaps on a small pool, where rounding is
# visible.

rng = random.Random(0)
reserve0, reserve1 = 10**6, 3 * 10**9
amounts = [rng.randint(1, reserve0 // 20) for _ in range(100)]
path = [run_trajectory(reserve0, reserve1, amounts[:n]) for n in range(1, len(amounts) + 1)]
print(path[-1])

fig, ax = plt.subplots()
ax.plot([p.cumulative_drift for p in path], label="K0 - Kn")
ax.plot([p.bound for p in path], label="n times largest input reserve")
ax.set_yscale("log")
ax.set_xlabel("swaps")
ax.legend()

##############################################################################
# At mainnet scale the relative slack is tiny.

report = run_fidelity(swaps=100, seed=1, reserve_bound=10**24, trajectories=20)
print("max relative slack:", report.max_relative_slack, "passed:", report.passed)
