"""Exception types shared across the package."""

import os

DEFAULT_CAP = 100_000


def default_cap() -> int:
    """Enumeration cap, overridable through the ``CFL_CAP`` environment variable."""
    raw = os.environ.get("CFL_CAP")
    if raw is None:
        return DEFAULT_CAP
    value = int(raw)
    if value <= 0:
        raise ValueError(f"CFL_CAP must be positive, got {raw!r}")
    return value


class CflError(Exception):
    """Base class; ``kind`` is used as the machine-readable error tag."""

    @property
    def kind(self) -> str:
        return type(self).__name__


class CycleDetected(CflError):
    pass


class DuplicateEdge(CflError):
    pass


class UnknownVertex(CflError):
    pass


class NotATandem(CflError):
    pass


class NotMonotone(CflError):
    pass


class CapExceeded(CflError):
    pass


class NotConvex(CflError):
    def __init__(self, cortege, witness):
        self.cortege = cortege
        self.witness = witness
        super().__init__(f"cortege {cortege} is neither standard nor anti-standard (witness {witness})")


class InconsistentAssignment(CflError):
    pass


class NotDense(CflError):
    pass


class NotPresent(CflError):
    pass


class NotAChain(CflError):
    pass


class ChainBroken(CflError):
    pass


class NotAMembrane(CflError):
    pass


class NotRealizable(CflError):
    pass


class PreconditionViolated(CflError):
    pass


class NotIncreasing(CflError):
    pass


class CombinedCycle(CflError):
    pass


class ChaseDiverged(CflError):
    pass


class PropertyViolated(CflError):
    pass
