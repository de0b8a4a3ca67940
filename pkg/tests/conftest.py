import json
from pathlib import Path

import pytest

from statetwin.providers.mock import MockProvider
from statetwin.twin import StateTwinProvider, build

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def golden():
    return json.loads((FIXTURES / "abi_golden.json").read_text())


class ScriptedTransport:
    """Answers JSON-RPC from the golden file; every eth_call must be pinned to the golden block."""

    def __init__(self, golden):
        self.golden = golden
        self.log = []

    def __call__(self, url, payload):
        method, params = payload["method"], payload["params"]
        self.log.append((method, params))
        g = self.golden
        if method == "eth_chainId":
            return {"jsonrpc": "2.0", "id": payload["id"], "result": hex(g["chain_id"])}
        if method == "eth_getBlockByNumber":
            header = {"number": hex(g["block"]), "timestamp": hex(g["timestamp"])}
            return {"jsonrpc": "2.0", "id": payload["id"], "result": header}
        if method == "eth_call":
            call, block = params
            if block != hex(g["block"]) or call["to"].lower() != g["multicall"].lower():
                return {"jsonrpc": "2.0", "id": payload["id"], "error": {"code": -32000, "message": "unpinned"}}
            reply = g["eth_calls"].get(call["data"][2:])
            if reply is None:
                return {"jsonrpc": "2.0", "id": payload["id"], "error": {"code": 3, "message": "unknown calldata"}}
            return {"jsonrpc": "2.0", "id": payload["id"], "result": "0x" + reply}
        return {"jsonrpc": "2.0", "id": payload["id"], "error": {"code": -32601, "message": method}}

    def calls(self, method):
        return [p for m, p in self.log if m == method]


@pytest.fixture
def transport(golden):
    return ScriptedTransport(golden)


class CountingProvider(StateTwinProvider):
    def __init__(self, inner=None):
        self.inner = inner or MockProvider()
        self.calls = 0

    def snapshot(self, pool_id, **kwargs):
        self.calls += 1
        return self.inner.snapshot(pool_id, **kwargs)


@pytest.fixture
def counting_provider():
    return CountingProvider()


@pytest.fixture
def mock():
    return MockProvider()


@pytest.fixture
def twin_of(mock):
    def make(name, **kwargs):
        return build(mock.snapshot(name), **kwargs)

    return make
