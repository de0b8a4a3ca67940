"""Deterministic, forkable in-memory replicas of AMM pool state.

Providers produce immutable snapshots; the builder lifts a snapshot into a
``PoolTwin`` that can swap, join, exit, observe and clone; primitives turn
twins into typed analytical records; the ensemble runs one primitive over
many forks of one snapshot.
"""

from statetwin.engine.types import ArithmeticMode
from statetwin.ensemble import aggregate, fork_and_evaluate, sweep_from_provider
from statetwin.providers import CSVProvider, LiveProvider, MockProvider
from statetwin.twin import (
    ChainContext,
    PoolSnapshot,
    PoolTwin,
    StateTwinBuilder,
    StateTwinProvider,
    build,
    clone,
    snapshot_from_json,
    snapshot_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "ArithmeticMode", "CSVProvider", "ChainContext", "LiveProvider", "MockProvider", "PoolSnapshot",
    "PoolTwin", "StateTwinBuilder", "StateTwinProvider", "aggregate", "build", "clone",
    "fork_and_evaluate", "snapshot_from_json", "snapshot_to_json", "sweep_from_provider",
]
