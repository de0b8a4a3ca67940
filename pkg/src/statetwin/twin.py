"""The State Twin: snapshots, the provider contract, the builder, the twin.

A provider turns a ``pool_id`` into an immutable, protocol-tagged
``PoolSnapshot``. The builder lifts a snapshot into a ``PoolTwin``, an
in-memory state machine that can advance (``apply``), report observables
(``observe``) and fork (``clone``). Everything downstream of the snapshot is
blind to where the snapshot came from.

Example::

    provider = MockProvider()
    twin = StateTwinBuilder().build(provider.snapshot("eth_dai_v2"))
    fork = twin.clone()
    fork.swap(10.0)
    assert twin.observe().spot_price == 100.0
"""

from __future__ import annotations

import copy
import hashlib
import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, fields, replace
from decimal import Context, Decimal
from fractions import Fraction
from typing import ClassVar, Optional

from statetwin.engine import transition
from statetwin.engine.types import (
    ArithmeticMode,
    BalancerState,
    ExitInput,
    JoinInput,
    Number,
    Observation,
    ProtocolState,
    StableswapState,
    SwapInput,
    TransitionReceipt,
    V2State,
    V3State,
)
from statetwin.errors import InexactSnapshot, InvalidState, UnsupportedInput, UnsupportedProtocol


@dataclass(frozen=True)
class ChainContext:
    """Where a snapshot sits on chain. All fields are None for synthetic sources.

    ``derived`` marks a snapshot taken from a twin after counterfactual
    transitions; its block fields then describe the origin, not the state.
    """

    block_number: Optional[int] = None
    timestamp: Optional[int] = None
    chain_id: Optional[int] = None
    derived: bool = False

    def __post_init__(self):
        if self.block_number is not None and self.block_number < 0:
            raise InvalidState(f"block_number must be >= 0, got {self.block_number}")


@dataclass(frozen=True, kw_only=True)
class PoolSnapshot:
    protocol: ClassVar[str] = ""

    pool_id: str
    token0_name: str = "token0"
    token1_name: str = "token1"
    context: ChainContext = field(default_factory=ChainContext)
    lp_supply: Number = 1.0
    decimals: Optional[tuple] = None

    def __post_init__(self):
        if self.decimals is not None:
            object.__setattr__(self, "decimals", tuple(self.decimals))


@dataclass(frozen=True, kw_only=True)
class V2PoolSnapshot(PoolSnapshot):
    protocol: ClassVar[str] = "v2"

    reserve0: Number
    reserve1: Number
    fee: Number = 0.003


@dataclass(frozen=True, kw_only=True)
class V3PoolSnapshot(PoolSnapshot):
    protocol: ClassVar[str] = "v3"

    sqrt_price: float
    liquidity: float
    current_tick: int
    lwr_tick: int
    upr_tick: int
    fee: float = 0.003
    decimal_shift: int = 0


@dataclass(frozen=True, kw_only=True)
class BalancerPoolSnapshot(PoolSnapshot):
    protocol: ClassVar[str] = "balancer"

    reserve0: float
    reserve1: float
    weight0: float = 0.5
    weight1: float = 0.5
    fee: float = 0.0025


@dataclass(frozen=True, kw_only=True)
class StableswapPoolSnapshot(PoolSnapshot):
    protocol: ClassVar[str] = "stableswap"

    reserves: tuple
    amplification: Number
    fee: Number = 0.0004

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "reserves", tuple(self.reserves))


SNAPSHOT_TYPES = {
    cls.protocol: cls
    for cls in (V2PoolSnapshot, V3PoolSnapshot, BalancerPoolSnapshot, StableswapPoolSnapshot)
}


class StateTwinProvider(ABC):
    """Abstract source of pool snapshots."""

    @abstractmethod
    def snapshot(self, pool_id: str, **kwargs) -> PoolSnapshot:
        """Return a typed snapshot for the given pool identifier.

        pool_id semantics are provider-specific: a recipe name for
        MockProvider, a row key for CSVProvider, ``"<protocol>:<address>"``
        for LiveProvider.
        """


# -- number mapping ---------------------------------------------------------


def _real(value, exact: bool):
    return Fraction(value) if exact else float(value)


def _minimal_units(value, decimals: int) -> int:
    """Map a whole-token quantity onto integer minimal units, exactly or not at all."""
    scaled = Fraction(value) * 10**decimals
    if scaled.denominator != 1:
        raise InexactSnapshot(f"{value} is not an integer number of 10**-{decimals} units")
    return int(scaled)


def _whole_tokens(value: int, decimals: int):
    if not decimals:
        return value
    return Decimal(value).scaleb(-decimals, context=Context(prec=100))


def _decimals_for(snapshot: PoolSnapshot, n: int) -> tuple:
    if snapshot.decimals is None:
        return (0,) * n
    if len(snapshot.decimals) != n:
        raise InvalidState(f"expected {n} decimals, got {snapshot.decimals}")
    return snapshot.decimals


def _exact_ratio(fee):
    return fee if isinstance(fee, (int, Fraction)) else Fraction(repr(float(fee)))


# -- builder ----------------------------------------------------------------


def _state_from_snapshot(snapshot: PoolSnapshot, mode: ArithmeticMode, exact: bool) -> ProtocolState:
    discretized = mode is ArithmeticMode.DISCRETIZED
    if isinstance(snapshot, V2PoolSnapshot):
        if discretized:
            d0, d1 = _decimals_for(snapshot, 2)
            return V2State(
                reserve0=_minimal_units(snapshot.reserve0, d0),
                reserve1=_minimal_units(snapshot.reserve1, d1),
                fee=_exact_ratio(snapshot.fee),
            )
        return V2State(
            reserve0=_real(snapshot.reserve0, exact),
            reserve1=_real(snapshot.reserve1, exact),
            fee=_real(snapshot.fee, exact) if snapshot.fee else 0,
        )
    if isinstance(snapshot, V3PoolSnapshot):
        if discretized:
            raise UnsupportedInput("V3 twins support Real mode only")
        return V3State(
            sqrt_price=float(snapshot.sqrt_price),
            liquidity=float(snapshot.liquidity),
            tick_lower=int(snapshot.lwr_tick),
            tick_upper=int(snapshot.upr_tick),
            fee=float(snapshot.fee),
            decimal_shift=int(snapshot.decimal_shift),
        )
    if isinstance(snapshot, BalancerPoolSnapshot):
        if discretized:
            raise UnsupportedInput("Balancer twins support Real mode only")
        return BalancerState(
            reserve0=float(snapshot.reserve0),
            reserve1=float(snapshot.reserve1),
            weight0=float(snapshot.weight0),
            weight1=float(snapshot.weight1),
            fee=float(snapshot.fee),
        )
    if isinstance(snapshot, StableswapPoolSnapshot):
        if discretized:
            decimals = _decimals_for(snapshot, len(snapshot.reserves))
            return StableswapState(
                reserves=tuple(_minimal_units(r, d) for r, d in zip(snapshot.reserves, decimals)),
                amplification=_exact_ratio(snapshot.amplification),
                fee=_exact_ratio(snapshot.fee),
            )
        return StableswapState(
            reserves=tuple(float(r) for r in snapshot.reserves),
            amplification=float(snapshot.amplification),
            fee=float(snapshot.fee),
        )
    raise UnsupportedProtocol(f"no builder for {type(snapshot).__name__}")


class PoolTwin:
    """In-memory replica of one pool.

    ``apply`` mutates the twin in place and is atomic: a failed transition
    leaves the state untouched. Use ``clone`` to fork.
    """

    def __init__(self, state: ProtocolState, origin: PoolSnapshot, mode: ArithmeticMode, lp_supply=1.0):
        self.state = state
        self.origin = origin
        self.mode = mode
        self.lp_supply = lp_supply
        self.transitions = 0

    @property
    def protocol(self) -> str:
        return transition.protocol_of(self.state)

    def apply(self, action) -> TransitionReceipt:
        new_state, receipt = transition.apply_transition(self.state, action, self.lp_supply)
        if isinstance(action, JoinInput):
            self.lp_supply = self.lp_supply + receipt.lp_minted
        elif isinstance(action, ExitInput):
            self.lp_supply = 0 if action.lp_fraction == 1 else self.lp_supply * (1 - action.lp_fraction)
        self.state = new_state
        self.transitions += 1
        return receipt

    def swap(self, amount_in, token_in: int = 0, token_out: Optional[int] = None) -> TransitionReceipt:
        return self.apply(SwapInput(amount_in, token_in, self.mode, token_out))

    def observe(self, numeraire: int = 1, lp_fraction: float = 0.0) -> Observation:
        return transition.observe(self.state, numeraire, lp_fraction)

    def clone(self) -> "PoolTwin":
        return copy.deepcopy(self)

    def state_hash(self) -> str:
        payload = repr((self.protocol, self.state, self.lp_supply, self.mode.value))
        return hashlib.sha256(payload.encode()).hexdigest()

    def snapshot(self) -> PoolSnapshot:
        return snapshot_of(self)

    def __repr__(self):
        return f"PoolTwin({self.origin.pool_id!r}, {self.state!r}, mode={self.mode.value})"


def build(snapshot: PoolSnapshot, mode: ArithmeticMode = ArithmeticMode.REAL, exact: bool = False) -> PoolTwin:
    """Lift a snapshot into a twin. ``exact`` keeps Real-mode reserves as Fractions."""
    if not isinstance(snapshot, PoolSnapshot):
        raise UnsupportedProtocol(f"cannot build a twin from {type(snapshot).__name__}")
    state = _state_from_snapshot(snapshot, mode, exact)
    lp_supply = Fraction(snapshot.lp_supply) if exact else float(snapshot.lp_supply)
    return PoolTwin(state, snapshot, mode, lp_supply)


class StateTwinBuilder:
    """Builder dispatch over the snapshot family."""

    def __init__(self, mode: ArithmeticMode = ArithmeticMode.REAL, exact: bool = False):
        self.mode = mode
        self.exact = exact

    def build(self, snapshot: PoolSnapshot) -> PoolTwin:
        return build(snapshot, self.mode, self.exact)


def clone(twin: PoolTwin) -> PoolTwin:
    return twin.clone()


def snapshot_of(twin: PoolTwin) -> PoolSnapshot:
    origin = twin.origin
    if twin.transitions == 0:
        return origin
    state = twin.state
    common = dict(
        pool_id=origin.pool_id,
        token0_name=origin.token0_name,
        token1_name=origin.token1_name,
        context=replace(origin.context, derived=True),
        lp_supply=twin.lp_supply,
        decimals=origin.decimals,
    )
    discretized = twin.mode is ArithmeticMode.DISCRETIZED
    if isinstance(state, V2State):
        d0, d1 = _decimals_for(origin, 2) if discretized else (0, 0)
        return V2PoolSnapshot(
            reserve0=_whole_tokens(state.reserve0, d0) if discretized else state.reserve0,
            reserve1=_whole_tokens(state.reserve1, d1) if discretized else state.reserve1,
            fee=origin.fee,
            **common,
        )
    if isinstance(state, V3State):
        return V3PoolSnapshot(
            sqrt_price=state.sqrt_price,
            liquidity=state.liquidity,
            current_tick=state.current_tick,
            lwr_tick=state.tick_lower,
            upr_tick=state.tick_upper,
            fee=state.fee,
            decimal_shift=state.decimal_shift,
            **common,
        )
    if isinstance(state, BalancerState):
        return BalancerPoolSnapshot(
            reserve0=state.reserve0,
            reserve1=state.reserve1,
            weight0=state.weight0,
            weight1=state.weight1,
            fee=state.fee,
            **common,
        )
    if isinstance(state, StableswapState):
        if discretized:
            decimals = _decimals_for(origin, len(state.reserves))
            reserves = tuple(_whole_tokens(r, d) for r, d in zip(state.reserves, decimals))
        else:
            reserves = state.reserves
        return StableswapPoolSnapshot(
            reserves=reserves, amplification=origin.amplification, fee=origin.fee, **common
        )
    raise UnsupportedProtocol(f"unknown protocol state {type(state).__name__}")


# -- canonical JSON ---------------------------------------------------------

_QUANTITY_FIELDS = {
    "reserve0", "reserve1", "reserves", "sqrt_price", "liquidity",
    "lp_supply", "amplification", "fee", "weight0", "weight1",
}


def _encode_quantity(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else str(value.numerator)
    if isinstance(value, Decimal):
        return str(value)
    if isinstance(value, (tuple, list)):
        return [_encode_quantity(v) for v in value]
    return value


def _decode_quantity(value):
    if isinstance(value, list):
        return tuple(_decode_quantity(v) for v in value)
    if isinstance(value, str):
        if "/" in value:
            return Fraction(value)
        try:
            return int(value)
        except ValueError:
            return Decimal(value)
    return value


def snapshot_to_dict(snapshot: PoolSnapshot) -> dict:
    out = {"protocol": snapshot.protocol}
    for f in fields(snapshot):
        value = getattr(snapshot, f.name)
        if f.name == "context":
            out["context"] = {
                "block_number": value.block_number,
                "timestamp": value.timestamp,
                "chain_id": value.chain_id,
                "derived": value.derived,
            }
        elif f.name in _QUANTITY_FIELDS:
            out[f.name] = _encode_quantity(value)
        elif isinstance(value, tuple):
            out[f.name] = list(value)
        else:
            out[f.name] = value
    return out


def snapshot_from_dict(data: dict) -> PoolSnapshot:
    data = dict(data)
    try:
        cls = SNAPSHOT_TYPES[data.pop("protocol")]
    except KeyError as exc:
        raise UnsupportedProtocol(f"unknown or missing protocol tag: {exc}") from None
    kwargs = {}
    for key, value in data.items():
        if key == "context":
            kwargs[key] = ChainContext(**(value or {}))
        elif key in _QUANTITY_FIELDS:
            kwargs[key] = _decode_quantity(value)
        elif key == "decimals" and value is not None:
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    return cls(**kwargs)


def snapshot_to_json(snapshot: PoolSnapshot, **kwargs) -> str:
    return json.dumps(snapshot_to_dict(snapshot), **kwargs)


def snapshot_from_json(text: str) -> PoolSnapshot:
    return snapshot_from_dict(json.loads(text))
