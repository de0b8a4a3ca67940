"""Exception hierarchy shared by every layer of the package."""


class StateTwinError(Exception):
    """Base class for all domain errors raised by statetwin."""


class InvalidState(StateTwinError, ValueError):
    pass


class NonPositiveAmount(StateTwinError, ValueError):
    pass


class DrainedReserve(StateTwinError):
    """A transition would leave a reserve at or below zero."""


class EmptyPool(StateTwinError):
    pass


class TickRangeExit(StateTwinError):
    """A V3 swap would push the price out of the active tick range."""


class NewtonNonConvergence(StateTwinError):
    pass


class NonProportionalDeposit(StateTwinError, ValueError):
    pass


class FractionOutOfRange(StateTwinError, ValueError):
    pass


class UnsupportedProtocol(StateTwinError):
    pass


class UnsupportedInput(StateTwinError):
    """The input type or arithmetic mode is not supported for this protocol."""


class InexactSnapshot(StateTwinError, ValueError):
    """Snapshot values cannot be mapped exactly onto integer minimal units."""


# providers


class UnknownRecipe(StateTwinError, KeyError):
    pass


class MissingRow(StateTwinError, KeyError):
    pass


class MalformedRow(StateTwinError, ValueError):
    pass


class RpcTransportError(StateTwinError):
    pass


class AbiDecodeError(StateTwinError):
    pass


class ReadOnlyViolation(StateTwinError):
    pass


# primitives


class NonPositiveEntry(StateTwinError, ValueError):
    pass


class NonPositiveDeposit(StateTwinError, ValueError):
    pass


class NonPositiveApr(StateTwinError, ValueError):
    pass


class EmptyTierList(StateTwinError, ValueError):
    pass


class EmptyPortfolio(StateTwinError, ValueError):
    pass


class EpsilonOutOfRange(StateTwinError, ValueError):
    pass


class NoRoot(StateTwinError):
    pass


# ensemble


class NoSuccessfulScenarios(StateTwinError):
    pass
