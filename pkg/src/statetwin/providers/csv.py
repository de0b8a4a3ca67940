"""Snapshots loaded from a per-pool CSV file.

Header: ``pool_id,protocol,token0,token1,reserve0,reserve1,fee`` plus
``weight0,weight1`` for Balancer rows and ``amplification`` for stableswap
rows. ``protocol`` and ``fee`` may be omitted, in which case rows are V2
with the V2 default fee.
"""

from __future__ import annotations

import csv
import io
import os
from typing import Union

from statetwin.errors import MalformedRow, MissingRow, UnsupportedProtocol
from statetwin.twin import (
    BalancerPoolSnapshot,
    PoolSnapshot,
    StableswapPoolSnapshot,
    StateTwinProvider,
    V2PoolSnapshot,
)

HEADER = ["pool_id", "protocol", "token0", "token1", "reserve0", "reserve1", "fee",
          "weight0", "weight1", "amplification"]


def _number(row: dict, key: str, pool_id: str) -> float:
    raw = row.get(key)
    if raw is None or raw.strip() == "":
        raise MalformedRow(f"row {pool_id!r}: missing column {key!r}")
    try:
        return float(raw)
    except ValueError:
        raise MalformedRow(f"row {pool_id!r}: {key}={raw!r} is not a number") from None


class CSVProvider(StateTwinProvider):
    """Load pool state from rows keyed by ``pool_id``."""

    def __init__(self, source: Union[str, os.PathLike, io.TextIOBase]):
        self.rows = self._load(source)

    @staticmethod
    def _load(source) -> dict:
        if isinstance(source, (str, os.PathLike)):
            with open(source, newline="", encoding="utf-8") as fh:
                return {row["pool_id"]: row for row in csv.DictReader(fh)}
        return {row["pool_id"]: row for row in csv.DictReader(source)}

    def snapshot(self, pool_id: str, **kwargs) -> PoolSnapshot:
        try:
            row = self.rows[pool_id]
        except KeyError:
            raise MissingRow(f"no CSV row for pool_id {pool_id!r}") from None
        protocol = (row.get("protocol") or "v2").strip().lower()
        common = dict(
            pool_id=pool_id,
            token0_name=row.get("token0") or "token0",
            token1_name=row.get("token1") or "token1",
        )
        reserve0 = _number(row, "reserve0", pool_id)
        reserve1 = _number(row, "reserve1", pool_id)
        has_fee = (row.get("fee") or "").strip() != ""
        fee = {"fee": _number(row, "fee", pool_id)} if has_fee else {}
        if protocol == "v2":
            return V2PoolSnapshot(reserve0=reserve0, reserve1=reserve1, **fee, **common)
        if protocol == "balancer":
            return BalancerPoolSnapshot(
                reserve0=reserve0,
                reserve1=reserve1,
                weight0=_number(row, "weight0", pool_id),
                weight1=_number(row, "weight1", pool_id),
                **fee,
                **common,
            )
        if protocol == "stableswap":
            return StableswapPoolSnapshot(
                reserves=(reserve0, reserve1),
                amplification=_number(row, "amplification", pool_id),
                **fee,
                **common,
            )
        raise UnsupportedProtocol(f"row {pool_id!r}: protocol {protocol!r} has no CSV layout")


def write_rows(snapshots, fh) -> None:
    """Write snapshots in the CSV layout read by ``CSVProvider``."""
    writer = csv.DictWriter(fh, fieldnames=HEADER, extrasaction="ignore")
    writer.writeheader()
    for snap in snapshots:
        row = {"pool_id": snap.pool_id, "protocol": snap.protocol,
               "token0": snap.token0_name, "token1": snap.token1_name, "fee": repr(float(snap.fee))}
        if isinstance(snap, StableswapPoolSnapshot):
            if len(snap.reserves) != 2:
                raise UnsupportedProtocol("the CSV layout holds two-asset pools only")
            row.update(reserve0=repr(float(snap.reserves[0])), reserve1=repr(float(snap.reserves[1])),
                       amplification=repr(float(snap.amplification)))
        elif isinstance(snap, (V2PoolSnapshot, BalancerPoolSnapshot)):
            row.update(reserve0=repr(float(snap.reserve0)), reserve1=repr(float(snap.reserve1)))
            if isinstance(snap, BalancerPoolSnapshot):
                row.update(weight0=repr(snap.weight0), weight1=repr(snap.weight1))
        else:
            raise UnsupportedProtocol(f"protocol {snap.protocol!r} has no CSV layout")
        writer.writerow(row)
