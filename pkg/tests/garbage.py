"""Malformed and hostile input lines for fuzzing the tool server."""

import json
import random

from statetwin.tools import CURATED_TOOLS


def _garbage(rng):
    kind = rng.randrange(6)
    if kind == 0:
        return "".join(chr(rng.randrange(1, 0x2FF)) for _ in range(rng.randrange(1, 80)))
    if kind == 1:
        return json.dumps(rng.choice([None, 1, "x", [], {}, [1, 2], {"jsonrpc": "1.0"}]))
    if kind == 2:
        return json.dumps({"jsonrpc": "2.0", "id": rng.randrange(100), "method": rng.choice(
            ["tools/call", "tools/list", "", 5, None]), "params": rng.choice([None, [], {}, "p", {"name": 3}])})
    if kind == 3:
        name = rng.choice(CURATED_TOOLS + ["nope"])
        args = {k: rng.choice([None, -1, 0, 1e308, "a", [], {}, True, 0.5])
                for k in rng.sample(["pool_id", "amount_in", "tiers", "price_change_pct", "depeg_epsilon",
                                     "fee_apr", "price_ratio", "deposit_amount", "positions"], 3)}
        return json.dumps({"jsonrpc": "2.0", "id": rng.randrange(100), "method": "tools/call",
                           "params": {"name": name, "arguments": args}})
    if kind == 4:
        return "[" * rng.randrange(1, 5000)
    return '{"jsonrpc": "2.0", "id": 1, "method": "tools/call", "params": {"name": "calculate_slippage", ' \
           '"arguments": {"pool_id": "eth_dai_v2", "amount_in": 1e300}}}'


def garbage_lines(n, seed=0):
    rng = random.Random(seed)
    return [_garbage(rng) for _ in range(n)]
