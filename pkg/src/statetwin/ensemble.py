"""Fork-and-evaluate: one snapshot, one fork per scenario, one distribution.

    twin = build(provider.snapshot("usdc_weth_v3"))
    sweep = fork_and_evaluate(twin, [-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3], SimulatePriceMove())
    aggregate(sweep, "position_value_after")

Each scenario runs on its own clone, so forks may be evaluated in parallel
without interfering; results land in pre-sized slots in grid order.
"""

from __future__ import annotations

import math
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence

from statetwin.errors import NoSuccessfulScenarios, StateTwinError, UnsupportedInput
from statetwin.primitives import get as get_primitive
from statetwin.primitives.results import jsonable
from statetwin.twin import build


@dataclass(frozen=True)
class ScenarioResult:
    scenario: Any
    result: Any = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class ScenarioSweep:
    scenarios: list
    results: List[ScenarioResult]
    wall_clock_ms: float
    primitive: str
    arg_name: str
    labels: list = field(default_factory=list)

    @property
    def failed(self) -> int:
        return sum(not r.ok for r in self.results)

    def values(self, field_name: str) -> list:
        return [getattr(r.result, field_name) for r in self.results if r.ok]

    def to_dict(self, field_name: Optional[str] = None) -> dict:
        out = {
            "primitive": self.primitive,
            "arg_name": self.arg_name,
            "wall_clock_ms": self.wall_clock_ms,
            "failed": self.failed,
            "results": [
                {
                    "scenario": jsonable(r.scenario),
                    "result": r.result.to_dict() if r.ok else None,
                    "error": r.error,
                }
                for r in self.results
            ],
        }
        if field_name is not None:
            out["aggregate"] = aggregate(self, field_name)
        return out


def _validate_grid(scenarios: Sequence) -> list:
    grid = list(scenarios)
    if not grid:
        raise UnsupportedInput("scenario grid is empty")
    for s in grid:
        if isinstance(s, (int, float)) and not math.isfinite(s):
            raise UnsupportedInput(f"scenario value {s} is not finite")
    return grid


def fork_and_evaluate(
    twin,
    scenarios: Sequence,
    primitive,
    arg_name: str = "price_change_pct",
    workers: Optional[int] = None,
    parallel: bool = True,
    labels: Optional[list] = None,
    **fixed,
) -> ScenarioSweep:
    """Evaluate ``primitive`` once per scenario on independent clones of ``twin``.

    A scenario is a value for ``arg_name`` or a dict of primitive arguments.
    Errors raised by the primitive are recorded on that scenario only.
    """
    grid = _validate_grid(scenarios)
    if isinstance(primitive, str):
        primitive = get_primitive(primitive)
    slots: List[Optional[ScenarioResult]] = [None] * len(grid)

    def run(index: int) -> None:
        scenario = grid[index]
        args = dict(fixed)
        args.update(scenario if isinstance(scenario, dict) else {arg_name: scenario})
        fork = twin.clone()  # one exclusively owned fork per scenario
        try:
            slots[index] = ScenarioResult(scenario, primitive.apply(fork, **args))
        except (StateTwinError, ValueError, ArithmeticError) as exc:
            slots[index] = ScenarioResult(scenario, error=f"{type(exc).__name__}: {exc}")

    start = time.perf_counter()
    if parallel and len(grid) > 1:
        n = workers or os.cpu_count() or 1
        with ThreadPoolExecutor(max_workers=min(n, len(grid))) as pool:
            list(pool.map(run, range(len(grid))))
    else:
        for i in range(len(grid)):
            run(i)
    elapsed = 1000 * (time.perf_counter() - start)
    return ScenarioSweep(
        scenarios=grid,
        results=slots,
        wall_clock_ms=elapsed,
        primitive=getattr(primitive, "name", type(primitive).__name__),
        arg_name=arg_name,
        labels=list(labels) if labels else [],
    )


def sweep_from_provider(provider, pool_id: str, scenarios, primitive, mode=None, **kwargs) -> ScenarioSweep:
    """Take exactly one snapshot, build one twin, sweep it. Timing excludes the fetch."""
    snapshot = provider.snapshot(pool_id)
    twin = build(snapshot) if mode is None else build(snapshot, mode)
    return fork_and_evaluate(twin, scenarios, primitive, **kwargs)


def _nearest_rank(sorted_values: list, q: float):
    # smallest value with at least q of the sample at or below it
    rank = max(1, math.ceil(q * len(sorted_values)))
    return sorted_values[rank - 1]


def aggregate(sweep: ScenarioSweep, field_name: str) -> dict:
    """Distribution of ``field_name`` over successful scenarios (nearest-rank quantiles)."""
    values = sweep.values(field_name)
    if not values:
        raise NoSuccessfulScenarios(f"all {len(sweep.results)} scenarios failed")
    ordered = sorted(float(v) for v in values)
    return {
        "field": field_name,
        "count": len(ordered),
        "failed": sweep.failed,
        "min": ordered[0],
        "max": ordered[-1],
        "mean": statistics.fmean(ordered),
        "median": _nearest_rank(ordered, 0.5),
        "q05": _nearest_rank(ordered, 0.05),
        "q95": _nearest_rank(ordered, 0.95),
    }
