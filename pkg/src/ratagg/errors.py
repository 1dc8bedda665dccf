"""Exception types shared across the library."""


class TopologyError(ValueError):
    """A topology violates a structural invariant."""


class ZeroConnectivityClient(TopologyError):
    """A client has no base station with a positive PHY rate."""


class NonPositiveWeight(TopologyError):
    """A client weight is zero or negative."""


class NegativeRate(TopologyError):
    """A PHY rate entry is negative."""


class TopologyFormatError(TopologyError):
    """A topology file does not match the expected schema."""


class DimensionMismatch(ValueError):
    """Array shapes do not agree with the topology."""


class NonPositiveThroughput(ValueError):
    """An operation that needs strictly positive throughput got a zero."""


class EmptyClientSet(ValueError):
    """An operation over clients was called with no clients."""


class InsufficientBSs(TopologyError):
    """Scenario generation cannot place the requested links per technology."""


class NoFeasibleGamma(RuntimeError):
    """No step size in the tuning grid reached the target potential."""


class NoConvergence(RuntimeError):
    """The global solver did not reach the stationarity tolerance in budget."""
