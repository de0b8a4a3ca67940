"""Snapshot sources: synthetic recipes, CSV rows and live JSON-RPC reads."""

from statetwin.providers.csv import CSVProvider
from statetwin.providers.live import LiveProvider, RpcEndpoint
from statetwin.providers.mock import RECIPES, MockProvider

__all__ = ["CSVProvider", "LiveProvider", "MockProvider", "RECIPES", "RpcEndpoint"]
