"""
Forking a pool and trading against the copy
===========================================

Build a twin from a mock snapshot, fork it, push a trade through the fork
and check that the original never moved.
"""

import matplotlib.pyplot as plt

from statetwin.providers.mock import MockProvider
from statetwin.twin import build

##############################################################################
# A twin from a snapshot
# ----------------------
#
# ``eth_dai_v2`` is a constant-product pool holding 1,000 ETH and 100,000 DAI.

provider = MockProvider()
twin = build(provider.snapshot("eth_dai_v2"))
print(twin.observe())
source_hash = twin.state_hash()

##############################################################################
# Swaps go to a fork. The receipt splits the invariant change into fee
# accrual and rounding slack.

fork = twin.clone()
sizes = [1.0, 5.0, 10.0, 25.0, 50.0]
prices = []
for size in sizes:
    receipt = fork.swap(size, 0)
    prices.append(fork.observe().spot_price)
    print(f"sold {size:>5} ETH for {receipt.amount_out:10.2f} DAI, fee accrual {receipt.drift.fee_accrual:.1f}")

assert twin.state_hash() == source_hash
print("source untouched:", twin.observe().spot_price)

##############################################################################
# Spot price on the fork after each trade.

fig, ax = plt.subplots()
ax.plot(range(1, len(sizes) + 1), prices, marker="o")
ax.set_xlabel("trade number")
ax.set_ylabel("DAI per ETH")
ax.set_title("fork spot price")
