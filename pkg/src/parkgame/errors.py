"""Exception types and the shared resource cap."""

from __future__ import annotations

import os

CAP_ENV = "PARKGAME_RESOURCE_CAP"


class ParkGameError(Exception):
    """Base class for domain errors raised by this package."""


class NotAParkingFunction(ParkGameError, ValueError):
    def __init__(self, prefs, failed_car=None):
        self.prefs = tuple(prefs)
        self.failed_car = failed_car
        msg = f"not a parking function: {self.prefs}"
        if failed_car is not None:
            msg += f" (car {failed_car} cannot park)"
        super().__init__(msg)


class ResourceLimit(ParkGameError, RuntimeError):
    """The requested brute-force or enumeration work exceeds the cap."""


class LPError(RuntimeError):
    """Raised by the exact simplex on infeasible or unbounded programs."""


class LPInfeasible(LPError):
    pass


class LPUnbounded(LPError):
    pass


def resource_cap(default: int) -> int:
    """Work cap for an exponential path: ``default`` unless the env var is set."""
    raw = os.environ.get(CAP_ENV)
    if raw is None or raw.strip() == "":
        return default
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 0:
        raise ValueError(f"{CAP_ENV} must be nonnegative")
    return cap


def check_cap(work: int, default: int, what: str) -> None:
    cap = resource_cap(default)
    if work > cap:
        raise ResourceLimit(f"{what}: {work} work units exceed cap {cap}")
