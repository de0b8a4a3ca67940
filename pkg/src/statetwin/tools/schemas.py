"""JSON Schemas for the curated tool set. Every tool takes a ``pool_id``."""

from __future__ import annotations

import copy

_POOL_ID = {"type": "string", "minLength": 1, "description": "Pool identifier understood by the server's provider."}
_AMOUNT = {"type": "number", "exclusiveMinimum": 0}
_TOKEN = {"type": "integer", "minimum": 0}


def _schema(properties: dict, required=()):
    return {
        "type": "object",
        "properties": {"pool_id": _POOL_ID, **properties},
        "required": ["pool_id", *required],
        "additionalProperties": False,
    }


TOOLS = [
    {
        "name": "analyze_position",
        "description": "Diagnose an LP position against holding its entry basket: net PnL and impermanent loss.",
        "inputSchema": _schema(
            {
                "lp_init_amt": {**_AMOUNT, "default": 1.0, "description": "LP tokens held."},
                "entry_x_amt": {**_AMOUNT, "description": "token0 deposited at entry."},
                "entry_y_amt": {**_AMOUNT, "description": "token1 deposited at entry."},
            },
            ["entry_x_amt", "entry_y_amt"],
        ),
    },
    {
        "name": "simulate_price_move",
        "description": "Arbitrage a fork of the pool to a relative price change and value the position there.",
        "inputSchema": _schema(
            {
                "price_change_pct": {"type": "number", "exclusiveMinimum": -1,
                                     "description": "Relative change, e.g. 0.1 for +10%."},
                "position_size_lp": {**_AMOUNT, "default": 1.0},
                "lwr_tick": {"type": "integer", "description": "V3 only: lower tick of the position."},
                "upr_tick": {"type": "integer", "description": "V3 only: upper tick of the position."},
            },
            ["price_change_pct"],
        ),
    },
    {
        "name": "check_pool_health",
        "description": "Spot price, TVL, depth for a 1% move, and warning flags.",
        "inputSchema": _schema({}),
    },
    {
        "name": "calculate_slippage",
        "description": "Execution price and slippage of a swap relative to the marginal price.",
        "inputSchema": _schema(
            {"amount_in": _AMOUNT, "token_in": {**_TOKEN, "default": 0}, "token_out": _TOKEN},
            ["amount_in"],
        ),
    },
    {
        "name": "optimal_deposit_split",
        "description": "How much of a single-sided V2 deposit to swap before joining proportionally.",
        "inputSchema": _schema(
            {"deposit_amount": _AMOUNT, "token_index": {"type": "integer", "enum": [0, 1], "default": 0}},
            ["deposit_amount"],
        ),
    },
    {
        "name": "compare_fee_tiers",
        "description": "The same swap under several fee tiers; reports outputs and the best tier.",
        "inputSchema": _schema(
            {
                "amount_in": _AMOUNT,
                "tiers": {"type": "array", "items": {"type": "number", "minimum": 0, "exclusiveMaximum": 1}},
                "token_in": {**_TOKEN, "default": 0},
            },
            ["amount_in", "tiers"],
        ),
    },
    {
        "name": "find_break_even_price",
        "description": "Price ratios at which accumulated fees offset impermanent loss.",
        "inputSchema": _schema(
            {"accumulated_fee_fraction": {"type": "number", "minimum": 0, "exclusiveMaximum": 1}},
            ["accumulated_fee_fraction"],
        ),
    },
    {
        "name": "find_break_even_time",
        "description": "Days of linear fee accrual needed to cover impermanent loss at a price ratio.",
        "inputSchema": _schema(
            {"fee_apr": _AMOUNT, "price_ratio": _AMOUNT},
            ["fee_apr", "price_ratio"],
        ),
    },
    {
        "name": "aggregate_portfolio",
        "description": "Total value of LP positions in a common unit; pool_id is the first position.",
        "inputSchema": _schema(
            {
                "lp_amount": {**_AMOUNT, "default": 1.0},
                "conversion_rate": {**_AMOUNT, "default": 1.0},
                "positions": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {"pool_id": _POOL_ID, "lp_amount": _AMOUNT, "conversion_rate": _AMOUNT},
                        "required": ["pool_id", "lp_amount"],
                        "additionalProperties": False,
                    },
                },
            }
        ),
    },
    {
        "name": "assess_depeg_risk",
        "description": "Stableswap LP value loss after asset 0 depegs to 1 - epsilon and arbitrage settles.",
        "inputSchema": _schema(
            {"depeg_epsilon": {"type": "number", "minimum": 0, "exclusiveMaximum": 1}},
            ["depeg_epsilon"],
        ),
    },
]

CURATED_TOOLS = [t["name"] for t in TOOLS]
_BY_NAME = {t["name"]: t for t in TOOLS}


def get_tool_schema(name: str) -> dict:
    return copy.deepcopy(_BY_NAME[name])


def list_tools() -> list:
    return [get_tool_schema(name) for name in CURATED_TOOLS]
