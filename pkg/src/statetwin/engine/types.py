"""Protocol states, transition inputs and receipts.

States are frozen dataclasses. Transitions never mutate a state; they return
a new one. Numeric fields are deliberately untyped beyond ``Number``: Real
mode runs on ``float`` or ``fractions.Fraction``, Discretized mode on ``int``
minimal units, and the math is written once for all three.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from statetwin.errors import FractionOutOfRange, InvalidState, NonPositiveAmount

Number = Union[int, float, Fraction]

TICK_BASE = 1.0001


class ArithmeticMode(enum.Enum):
    REAL = "real"
    DISCRETIZED = "discretized"


def sqrt_price_at_tick(tick: int, decimal_shift: int = 0) -> float:
    """sqrt of 1.0001**tick, rescaled to whole-token units by 10**decimal_shift."""
    return TICK_BASE ** (tick / 2) * 10.0 ** (decimal_shift / 2)


def tick_at_sqrt_price(sqrt_price: float, decimal_shift: int = 0) -> int:
    log_price = 2.0 * math.log(sqrt_price) - decimal_shift * math.log(10.0)
    return math.floor(log_price / math.log(TICK_BASE))


@dataclass(frozen=True)
class V2State:
    reserve0: Number
    reserve1: Number
    fee: Number = 0

    def __post_init__(self):
        if self.reserve0 < 0 or self.reserve1 < 0:
            raise InvalidState(f"negative reserve in {self}")
        if not 0 <= self.fee < 1:
            raise InvalidState(f"fee {self.fee} outside [0, 1)")

    @property
    def empty(self) -> bool:
        return self.reserve0 == 0 or self.reserve1 == 0


@dataclass(frozen=True)
class V3State:
    sqrt_price: float
    liquidity: float
    tick_lower: int
    tick_upper: int
    fee: float = 0.0
    decimal_shift: int = 0

    def __post_init__(self):
        if self.sqrt_price <= 0 or self.liquidity <= 0:
            raise InvalidState("sqrt_price and liquidity must be positive")
        if self.tick_lower >= self.tick_upper:
            raise InvalidState("tick_lower must be below tick_upper")
        if not 0 <= self.fee < 1:
            raise InvalidState(f"fee {self.fee} outside [0, 1)")
        if not self.in_range(self.sqrt_price):
            raise InvalidState(
                f"sqrt_price {self.sqrt_price} outside ticks [{self.tick_lower}, {self.tick_upper})"
            )

    @property
    def sqrt_price_lower(self) -> float:
        return sqrt_price_at_tick(self.tick_lower, self.decimal_shift)

    @property
    def sqrt_price_upper(self) -> float:
        return sqrt_price_at_tick(self.tick_upper, self.decimal_shift)

    @property
    def current_tick(self) -> int:
        return tick_at_sqrt_price(self.sqrt_price, self.decimal_shift)

    def in_range(self, sqrt_price: float) -> bool:
        return self.sqrt_price_lower <= sqrt_price < self.sqrt_price_upper


@dataclass(frozen=True)
class BalancerState:
    reserve0: float
    reserve1: float
    weight0: float = 0.5
    weight1: float = 0.5
    fee: float = 0.0

    def __post_init__(self):
        if self.reserve0 < 0 or self.reserve1 < 0:
            raise InvalidState(f"negative reserve in {self}")
        if self.weight0 <= 0 or self.weight1 <= 0 or abs(self.weight0 + self.weight1 - 1) > 1e-15:
            raise InvalidState(f"weights ({self.weight0}, {self.weight1}) must be positive and sum to 1")
        if not 0 <= self.fee < 1:
            raise InvalidState(f"fee {self.fee} outside [0, 1)")

    @property
    def empty(self) -> bool:
        return self.reserve0 == 0 or self.reserve1 == 0


@dataclass(frozen=True)
class StableswapState:
    reserves: tuple
    amplification: Number
    fee: Number = 0

    def __post_init__(self):
        object.__setattr__(self, "reserves", tuple(self.reserves))
        if len(self.reserves) < 2:
            raise InvalidState("stableswap needs at least two assets")
        if any(r < 0 for r in self.reserves):
            raise InvalidState(f"negative reserve in {self}")
        if self.amplification <= 0:
            raise InvalidState("amplification must be positive")
        if not 0 <= self.fee < 1:
            raise InvalidState(f"fee {self.fee} outside [0, 1)")

    @property
    def n_assets(self) -> int:
        return len(self.reserves)

    @property
    def empty(self) -> bool:
        return any(r == 0 for r in self.reserves)


ProtocolState = Union[V2State, V3State, BalancerState, StableswapState]


@dataclass(frozen=True)
class SwapInput:
    amount_in: Number
    token_in: int = 0
    mode: ArithmeticMode = ArithmeticMode.REAL
    token_out: Optional[int] = None  # only needed for stableswap pools with n > 2

    def __post_init__(self):
        if self.amount_in < 0:
            raise NonPositiveAmount(f"amount_in must be nonnegative, got {self.amount_in}")


@dataclass(frozen=True)
class JoinInput:
    deposits: tuple

    def __post_init__(self):
        object.__setattr__(self, "deposits", tuple(self.deposits))
        if any(d < 0 for d in self.deposits) or not any(d > 0 for d in self.deposits):
            raise NonPositiveAmount("deposits must be nonnegative with at least one positive")


@dataclass(frozen=True)
class ExitInput:
    lp_fraction: float

    def __post_init__(self):
        if not 0 < self.lp_fraction <= 1:
            raise FractionOutOfRange(f"lp_fraction {self.lp_fraction} outside (0, 1]")


@dataclass(frozen=True)
class InvariantDrift:
    """Per-transition invariant bookkeeping.

    ``fee_accrual`` is the invariant increase attributable to fees and
    ``rounding_slack`` the decrease caused by floor rounding. For a
    discretized constant-product swap the slack never exceeds
    ``reserve_bound_used``, the post-swap reserve of the input leg.
    """

    fee_accrual: Number = 0
    rounding_slack: Number = 0
    reserve_bound_used: Optional[Number] = None


@dataclass(frozen=True)
class Observation:
    spot_price: float
    tvl: float
    position_value: float


@dataclass(frozen=True)
class TransitionReceipt:
    amount_out: Number = 0
    drift: InvariantDrift = field(default_factory=InvariantDrift)
    lp_minted: Number = 0
    withdrawn: tuple = ()
