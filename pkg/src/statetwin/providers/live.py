"""Read-only Uniswap V2/V3 snapshots over Ethereum JSON-RPC.

Each snapshot resolves its block tag once, then issues every state read
against that explicit block. Pool state is fetched in a single Multicall3
``aggregate3`` round trip; token metadata (addresses, decimals, symbols,
fee tier, tick spacing) is immutable and cached per contract address.

pool_id has the form ``"uniswap_v2:<address>"`` or ``"uniswap_v3:<address>"``.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass, field, replace
from decimal import Context, Decimal
from typing import Callable, Optional, Union

from eth_utils import is_address, to_checksum_address

from statetwin.engine.types import sqrt_price_at_tick
from statetwin.errors import (
    AbiDecodeError,
    ReadOnlyViolation,
    RpcTransportError,
    UnsupportedProtocol,
)
from statetwin.providers import abi
from statetwin.twin import ChainContext, PoolSnapshot, StateTwinProvider, V2PoolSnapshot, V3PoolSnapshot

RPC_URL_ENV = "STATETWIN_RPC_URL"
V2_FEE = 0.003
LP_DECIMALS = 18

Transport = Callable[[str, dict], dict]

_WRITE_METHODS = ("eth_sendTransaction", "eth_sendRawTransaction", "eth_sign", "eth_signTransaction",
                  "eth_signTypedData", "personal_")
_ids = itertools.count(1)


def http_transport(url: str, payload: dict, timeout: float = 30.0) -> dict:
    body = json.dumps(payload).encode()
    req = urllib.request.Request(url, data=body, headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return json.loads(resp.read())
    except (urllib.error.URLError, OSError, ValueError) as exc:
        raise RpcTransportError(f"{payload.get('method')} failed: {exc}") from None


def _hex_block(block: int) -> str:
    return hex(block)


def _hex_to_bytes(value) -> bytes:
    if not isinstance(value, str) or not value.startswith("0x"):
        raise AbiDecodeError(f"expected 0x-prefixed hex, got {value!r}")
    try:
        return bytes.fromhex(value[2:])
    except ValueError:
        raise AbiDecodeError(f"invalid hex payload {value[:20]!r}...") from None


@dataclass
class RpcEndpoint:
    """Read-only JSON-RPC handle. ``request`` refuses signing and sending methods."""

    url: str
    pinned_block: Optional[int] = None
    chain_id: Optional[int] = None
    transport: Transport = field(default=http_transport, repr=False)

    def request(self, method: str, params: list):
        if method.startswith(_WRITE_METHODS):
            raise ReadOnlyViolation(f"{method} would sign or send; this endpoint is read-only")
        reply = self.transport(self.url, {"jsonrpc": "2.0", "id": next(_ids), "method": method, "params": params})
        if not isinstance(reply, dict):
            raise RpcTransportError(f"{method}: non-object reply {reply!r}")
        if reply.get("error") is not None:
            raise RpcTransportError(f"{method}: {reply['error']}")
        if "result" not in reply:
            raise RpcTransportError(f"{method}: reply carries neither result nor error")
        return reply["result"]

    def eth_call(self, to: str, data: bytes, block: Optional[int] = None) -> bytes:
        block = self.pinned_block if block is None else block
        if block is None:
            raise RpcTransportError("eth_call needs a pinned block")
        result = self.request("eth_call", [{"to": to, "data": "0x" + data.hex()}, _hex_block(block)])
        return _hex_to_bytes(result)


@dataclass(frozen=True)
class _V2Meta:
    token0: str
    token1: str
    decimals: tuple
    symbols: tuple


@dataclass(frozen=True)
class _V3Meta(_V2Meta):
    fee: int = 0
    tick_spacing: int = 1


def parse_pool_id(pool_id: str) -> tuple:
    protocol, sep, address = pool_id.partition(":")
    if not sep:
        raise UnsupportedProtocol(f"expected '<protocol>:<address>', got {pool_id!r}")
    protocol = protocol.strip().lower()
    if protocol not in ("uniswap_v2", "uniswap_v3"):
        raise UnsupportedProtocol(f"live reads cover uniswap_v2 and uniswap_v3 only, not {protocol!r}")
    if not is_address(address):
        raise UnsupportedProtocol(f"{address!r} is not a 20-byte hex address")
    return protocol, to_checksum_address(address)


class LiveProvider(StateTwinProvider):
    """Snapshots of Uniswap V2 pairs and V3 pools at a pinned block."""

    def __init__(
        self,
        rpc_url: Optional[str] = None,
        transport: Optional[Transport] = None,
        multicall_address: str = abi.MULTICALL3_ADDRESS,
    ):
        url = rpc_url or os.environ.get(RPC_URL_ENV)
        if not url:
            raise RpcTransportError(f"no RPC URL given and {RPC_URL_ENV} is unset")
        self.url = url
        self.transport = transport or http_transport
        self.multicall_address = to_checksum_address(multicall_address)
        self._chain_id: Optional[int] = None
        self._meta: dict = {}
        self._last_block: Optional[int] = None
        self._lock = threading.Lock()

    def _endpoint(self, block: Optional[int] = None) -> RpcEndpoint:
        return RpcEndpoint(self.url, block, self._chain_id, self.transport)

    def raw_endpoint(self) -> RpcEndpoint:
        """The underlying read-only endpoint, pinned to the last snapshot's block."""
        return self._endpoint(self._last_block)

    def chain_id(self) -> int:
        if self._chain_id is None:
            raw = self._endpoint().request("eth_chainId", [])
            with self._lock:
                self._chain_id = int(raw, 16)
        return self._chain_id

    def resolve_block(self, block: Union[str, int] = "latest") -> tuple:
        """Return ``(number, timestamp)`` for a tag or number, read once."""
        tag = block if isinstance(block, str) else _hex_block(int(block))
        header = self._endpoint().request("eth_getBlockByNumber", [tag, False])
        if not header:
            raise RpcTransportError(f"block {block!r} not found")
        try:
            return int(header["number"], 16), int(header["timestamp"], 16)
        except (KeyError, TypeError, ValueError):
            raise RpcTransportError(f"malformed block header for {block!r}") from None

    def _aggregate(self, endpoint: RpcEndpoint, calls) -> list:
        data = endpoint.eth_call(self.multicall_address, abi.encode_aggregate3(calls))
        return abi.decode_aggregate3(calls, data)

    def _token_meta(self, endpoint, token0: str, token1: str) -> tuple:
        calls = [abi.call(t, read) for t in (token0, token1) for read in (abi.DECIMALS, abi.SYMBOL)]
        (d0,), (s0,), (d1,), (s1,) = self._aggregate(endpoint, calls)
        return (int(d0), int(d1)), (abi.decode_symbol(s0), abi.decode_symbol(s1))

    def _v2_meta(self, endpoint, pair: str) -> _V2Meta:
        meta = self._meta.get(pair)
        if meta is None:
            (t0,), (t1,) = self._aggregate(endpoint, [abi.call(pair, abi.TOKEN0), abi.call(pair, abi.TOKEN1)])
            decimals, symbols = self._token_meta(endpoint, t0, t1)
            meta = _V2Meta(to_checksum_address(t0), to_checksum_address(t1), decimals, symbols)
            with self._lock:
                self._meta[pair] = meta
        return meta

    def _v3_meta(self, endpoint, pool: str) -> _V3Meta:
        meta = self._meta.get(pool)
        if meta is None:
            reads = (abi.TOKEN0, abi.TOKEN1, abi.FEE, abi.TICK_SPACING)
            (t0,), (t1,), (fee,), (spacing,) = self._aggregate(endpoint, [abi.call(pool, r) for r in reads])
            decimals, symbols = self._token_meta(endpoint, t0, t1)
            meta = _V3Meta(to_checksum_address(t0), to_checksum_address(t1), decimals, symbols,
                           int(fee), int(spacing))
            with self._lock:
                self._meta[pool] = meta
        return meta

    def snapshot(self, pool_id: str, block: Union[str, int] = "latest", **kwargs) -> PoolSnapshot:
        protocol, address = parse_pool_id(pool_id)
        chain_id = self.chain_id()
        number, timestamp = self.resolve_block(block)
        endpoint = self._endpoint(number)
        context = ChainContext(block_number=number, timestamp=timestamp, chain_id=chain_id)
        if protocol == "uniswap_v2":
            snap = self._v2_snapshot(endpoint, pool_id, address)
        else:
            snap = self._v3_snapshot(endpoint, pool_id, address)
        with self._lock:
            self._last_block = number
        return replace(snap, context=context)

    def _v2_snapshot(self, endpoint, pool_id, pair) -> V2PoolSnapshot:
        meta = self._v2_meta(endpoint, pair)
        state_calls = [abi.call(pair, abi.V2_GET_RESERVES), abi.call(pair, abi.TOTAL_SUPPLY)]
        (r0, r1, _ts), (supply,) = self._aggregate(endpoint, state_calls)
        return V2PoolSnapshot(
            pool_id=pool_id,
            token0_name=meta.symbols[0],
            token1_name=meta.symbols[1],
            reserve0=whole_units(r0, meta.decimals[0]),
            reserve1=whole_units(r1, meta.decimals[1]),
            fee=V2_FEE,
            lp_supply=whole_units(supply, LP_DECIMALS),
            decimals=meta.decimals,
        )

    def _v3_snapshot(self, endpoint, pool_id, pool) -> V3PoolSnapshot:
        meta = self._v3_meta(endpoint, pool)
        state_calls = [abi.call(pool, abi.V3_SLOT0), abi.call(pool, abi.V3_LIQUIDITY)]
        slot0, (liquidity,) = self._aggregate(endpoint, state_calls)
        sqrt_price_x96, tick = slot0[0], slot0[1]
        dec0, dec1 = meta.decimals
        shift = dec0 - dec1
        lwr = (tick // meta.tick_spacing) * meta.tick_spacing
        upr = lwr + meta.tick_spacing
        sqrt_price = v3_sqrt_price(sqrt_price_x96, shift)
        # float tick bounds can disagree with the on-chain tick by an ulp
        lo, hi = sqrt_price_at_tick(lwr, shift), sqrt_price_at_tick(upr, shift)
        sqrt_price = min(max(sqrt_price, lo), math.nextafter(hi, 0.0))
        return V3PoolSnapshot(
            pool_id=pool_id,
            token0_name=meta.symbols[0],
            token1_name=meta.symbols[1],
            sqrt_price=sqrt_price,
            liquidity=v3_liquidity(liquidity, dec0, dec1),
            current_tick=int(tick),
            lwr_tick=lwr,
            upr_tick=upr,
            fee=meta.fee / 1_000_000,
            decimal_shift=shift,
            decimals=meta.decimals,
        )


# wide enough for any uint256 plus the largest decimal shift, so scaleb never rounds
EXACT = Context(prec=100)


def whole_units(raw: int, decimals: int) -> Decimal:
    """Exact whole-token amount of ``raw`` minimal units."""
    return Decimal(int(raw)).scaleb(-decimals, context=EXACT)


def minimal_units(amount: Decimal, decimals: int) -> int:
    return int(Decimal(amount).scaleb(decimals, context=EXACT).to_integral_value(context=EXACT))


def v3_sqrt_price(sqrt_price_x96: int, decimal_shift: int) -> float:
    """Whole-token sqrt price (token1 per token0) from Q64.96."""
    return float(Decimal(sqrt_price_x96) / Decimal(2**96) * Decimal(10) ** (Decimal(decimal_shift) / 2))


def v3_liquidity(raw: int, dec0: int, dec1: int) -> float:
    """Whole-token liquidity: virtual reserves L/sqrtP and L*sqrtP come out in whole units."""
    return float(Decimal(int(raw)) / Decimal(10) ** (Decimal(dec0 + dec1) / 2))
