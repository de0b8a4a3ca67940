"""The primitive contract: no constructor arguments, all work in ``apply``."""

from __future__ import annotations

import math

from statetwin.errors import EmptyPool


class Primitive:
    """Base class. Subclasses set ``name`` and implement ``apply(twin, **args)``.

    Instances hold no state that affects results, so one instance can be
    shared across threads. Primitives that simulate work on a clone.
    """

    name: str = ""

    def apply(self, twin, **kwargs):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}()"


def positive(value, error: type, label: str) -> float:
    if value is None or not math.isfinite(value) or value <= 0:
        raise error(f"{label} must be positive and finite, got {value}")
    return value


def lp_share(twin, lp_amount) -> float:
    if twin.lp_supply == 0:
        raise EmptyPool("the pool has no LP supply")
    return float(lp_amount) / float(twin.lp_supply)
