"""Read-only contract call encoding and Multicall3 batching.

Encoding and decoding go through ``eth_abi``; selectors are the first four
bytes of keccak-256 of the canonical signature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from eth_abi import decode, encode
from eth_abi.exceptions import DecodingError
from eth_utils import function_signature_to_4byte_selector, to_canonical_address, to_checksum_address

from statetwin.errors import AbiDecodeError

MULTICALL3_ADDRESS = "0xcA11bde05977b3631167028862bE2a173976CA11"
AGGREGATE3 = "aggregate3((address,bool,bytes)[])"


def selector(signature: str) -> bytes:
    return function_signature_to_4byte_selector(signature)


@dataclass(frozen=True)
class AbiCall:
    """One contract read: target, selector, encoded arguments, return layout."""

    target: bytes
    selector: bytes
    encoded_args: bytes = b""
    output_types: tuple = ()

    @classmethod
    def of(cls, target: str, signature: str, output_types: Sequence[str], arg_types=(), args=()):
        encoded = encode(list(arg_types), list(args)) if arg_types else b""
        return cls(to_canonical_address(target), selector(signature), encoded, tuple(output_types))

    @property
    def calldata(self) -> bytes:
        return self.selector + self.encoded_args

    @property
    def target_hex(self) -> str:
        return to_checksum_address(self.target)

    def decode(self, data: bytes) -> tuple:
        if not self.output_types:
            return (bytes(data),)  # caller decodes
        try:
            return tuple(decode(list(self.output_types), data))
        except (DecodingError, OverflowError, ValueError) as exc:
            raise AbiDecodeError(
                f"cannot decode {len(data)} bytes as {self.output_types}: {exc}"
            ) from None


# -- the reads LiveProvider needs ---------------------------------------------

V2_GET_RESERVES = ("getReserves()", ("uint112", "uint112", "uint32"))
V3_SLOT0 = (
    "slot0()",
    ("uint160", "int24", "uint16", "uint16", "uint16", "uint8", "bool"),
)
V3_LIQUIDITY = ("liquidity()", ("uint128",))
TOKEN0 = ("token0()", ("address",))
TOKEN1 = ("token1()", ("address",))
FEE = ("fee()", ("uint24",))
TICK_SPACING = ("tickSpacing()", ("int24",))
TOTAL_SUPPLY = ("totalSupply()", ("uint256",))
DECIMALS = ("decimals()", ("uint8",))
SYMBOL = ("symbol()", ())  # string or bytes32 depending on the token; see decode_symbol


def call(target: str, read: tuple) -> AbiCall:
    signature, outputs = read
    return AbiCall.of(target, signature, outputs)


def encode_aggregate3(calls: Sequence[AbiCall]) -> bytes:
    """Calldata for Multicall3 ``aggregate3`` with allowFailure false on every call."""
    payload = [(c.target_hex, False, c.calldata) for c in calls]
    return selector(AGGREGATE3) + encode(["(address,bool,bytes)[]"], [payload])


def decode_aggregate3(calls: Sequence[AbiCall], data: bytes) -> list:
    """Split an ``aggregate3`` response into per-call decoded tuples."""
    try:
        (results,) = decode(["(bool,bytes)[]"], data)
    except (DecodingError, OverflowError, ValueError) as exc:
        raise AbiDecodeError(f"malformed aggregate3 response: {exc}") from None
    if len(results) != len(calls):
        raise AbiDecodeError(f"aggregate3 returned {len(results)} results for {len(calls)} calls")
    out = []
    for c, (ok, blob) in zip(calls, results):
        if not ok:
            raise AbiDecodeError(f"call {c.selector.hex()} to {c.target_hex} reverted")
        out.append(c.decode(blob))
    return out


def decode_symbol(data: bytes) -> str:
    """Token symbol from either a dynamic string or a bytes32 return."""
    try:
        (text,) = decode(["string"], data)
        return text
    except (DecodingError, OverflowError, ValueError, UnicodeDecodeError):
        pass
    if len(data) == 32:
        return data.rstrip(b"\x00").decode("utf-8", errors="replace")
    raise AbiDecodeError(f"cannot decode {len(data)} bytes as a token symbol")
