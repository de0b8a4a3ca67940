"""Regenerate abi_golden.json by packing ABI words by hand.

Deliberately independent of eth_abi: every word is laid out here from the
ABI head/tail rules, so the package's codec is checked against a second
implementation. Run from the repository root:

    python3 tests/fixtures/make_golden.py
"""

import json
import math
from pathlib import Path

from eth_utils import keccak

MULTICALL = "0xcA11bde05977b3631167028862bE2a173976CA11"
V2_PAIR = "0xB4e16d0168e52d35CaCD2c6185b44281Ec28C9Dc"  # USDC/WETH
V3_POOL = "0x88e6A0c2dDD26FEEb64F039a2c41296FcB3f5640"  # USDC/WETH 5 bps
USDC = "0xA0b86991c6218b36c1d19D4a2e9Eb0cE3606eB48"
WETH = "0xC02aaA39b223FE8D0A0e5C4F27eAD9083C756Cc2"

BLOCK = 18_000_000
TIMESTAMP = 1_693_066_895
CHAIN_ID = 1

V2_RESERVE0 = 33_503_812_567_123  # USDC, 6 decimals
V2_RESERVE1 = 20_940_132_850_044_781_069_044  # WETH, 18 decimals
V2_TS = 1_693_066_883
V2_SUPPLY = 631_713_895_218_867_215

V3_SQRT_X96 = 25_000 * 2**96  # raw price 6.25e8, i.e. 1600 USDC per WETH
V3_LIQUIDITY = 21_345_678_901_234_567_890
V3_FEE = 500
V3_SPACING = 10


def sel(sig):
    return keccak(text=sig)[:4]


def word(n):
    return (n % 2**256).to_bytes(32, "big")


def addr(a):
    return bytes(12) + bytes.fromhex(a[2:])


def padded(b):
    return b + bytes(-len(b) % 32)


def dyn_bytes(b):
    return word(len(b)) + padded(b)


def string(s):
    return word(0x20) + dyn_bytes(s.encode())


def tick_at(price):
    t = math.floor(math.log(price) / math.log(1.0001))
    while 1.0001 ** (t + 1) <= price:
        t += 1
    while 1.0001**t > price:
        t -= 1
    return t


def aggregate3_calldata(calls):
    # aggregate3((address,bool,bytes)[]): head offset, length, per-tuple offsets, tuples
    tuples = [addr(t) + word(0) + word(0x60) + dyn_bytes(data) for t, data in calls]
    offsets, pos = [], 32 * len(tuples)
    for t in tuples:
        offsets.append(word(pos))
        pos += len(t)
    return sel("aggregate3((address,bool,bytes)[])") + word(0x20) + word(len(calls)) + b"".join(offsets) + b"".join(tuples)


def aggregate3_return(blobs):
    # (bool,bytes)[]: same layout, each tuple is (success, offset 0x40, bytes)
    tuples = [word(1) + word(0x40) + dyn_bytes(b) for b in blobs]
    offsets, pos = [], 32 * len(tuples)
    for t in tuples:
        offsets.append(word(pos))
        pos += len(t)
    return word(0x20) + word(len(blobs)) + b"".join(offsets) + b"".join(tuples)


def main():
    v3_tick = tick_at(V3_SQRT_X96**2 / 2**192)
    get_reserves = sel("getReserves()")
    v2_reserves_ret = word(V2_RESERVE0) + word(V2_RESERVE1) + word(V2_TS)
    slot0_ret = word(V3_SQRT_X96) + word(v3_tick) + word(12) + word(723) + word(723) + word(0) + word(1)
    liquidity_ret = word(V3_LIQUIDITY)

    v2_meta = [(V2_PAIR, sel("token0()")), (V2_PAIR, sel("token1()"))]
    v3_meta = [(V3_POOL, sel("token0()")), (V3_POOL, sel("token1()")),
               (V3_POOL, sel("fee()")), (V3_POOL, sel("tickSpacing()"))]
    tokens = [(USDC, sel("decimals()")), (USDC, sel("symbol()")),
              (WETH, sel("decimals()")), (WETH, sel("symbol()"))]
    v2_state = [(V2_PAIR, get_reserves), (V2_PAIR, sel("totalSupply()"))]
    v3_state = [(V3_POOL, sel("slot0()")), (V3_POOL, sel("liquidity()"))]

    token_blobs = [word(6), string("USDC"), word(18), string("WETH")]
    eth_calls = {
        aggregate3_calldata(v2_meta).hex(): aggregate3_return([addr(USDC), addr(WETH)]).hex(),
        aggregate3_calldata(v3_meta).hex(): aggregate3_return(
            [addr(USDC), addr(WETH), word(V3_FEE), word(V3_SPACING)]).hex(),
        aggregate3_calldata(tokens).hex(): aggregate3_return(token_blobs).hex(),
        aggregate3_calldata(v2_state).hex(): aggregate3_return([v2_reserves_ret, word(V2_SUPPLY)]).hex(),
        aggregate3_calldata(v3_state).hex(): aggregate3_return([slot0_ret, liquidity_ret]).hex(),
    }
    golden = {
        "block": BLOCK,
        "timestamp": TIMESTAMP,
        "chain_id": CHAIN_ID,
        "multicall": MULTICALL,
        "v2_pair": V2_PAIR,
        "v3_pool": V3_POOL,
        "tokens": {"USDC": USDC, "WETH": WETH},
        "v2": {
            "get_reserves_calldata": get_reserves.hex(),
            "get_reserves_return": v2_reserves_ret.hex(),
            "reserve0": V2_RESERVE0, "reserve1": V2_RESERVE1, "block_timestamp_last": V2_TS,
            "total_supply": V2_SUPPLY,
            "state_aggregate3_calldata": aggregate3_calldata(v2_state).hex(),
            "state_aggregate3_return": aggregate3_return([v2_reserves_ret, word(V2_SUPPLY)]).hex(),
        },
        "v3": {
            "sqrt_price_x96": V3_SQRT_X96, "tick": v3_tick, "liquidity": V3_LIQUIDITY,
            "fee": V3_FEE, "tick_spacing": V3_SPACING,
            "slot0_return": slot0_ret.hex(),
            "state_aggregate3_calldata": aggregate3_calldata(v3_state).hex(),
            "state_aggregate3_return": aggregate3_return([slot0_ret, liquidity_ret]).hex(),
        },
        "negative_tick_word": word(-887272).hex(),
        "bytes32_symbol": padded(b"MKR").hex(),
        "eth_calls": eth_calls,
    }
    out = Path(__file__).with_name("abi_golden.json")
    out.write_text(json.dumps(golden, indent=2) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
